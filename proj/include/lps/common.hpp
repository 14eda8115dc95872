#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace lps {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define LPS_DEFINE_ERROR(Name)                                      \
  struct Name : Error {                                             \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

LPS_DEFINE_ERROR(UnsupportedFamily);
LPS_DEFINE_ERROR(RankOutOfRange);
LPS_DEFINE_ERROR(DimensionMismatch);
LPS_DEFINE_ERROR(CartanNotFound);
LPS_DEFINE_ERROR(DegenerateEigenvalues);
LPS_DEFINE_ERROR(ClosureOverflow);
LPS_DEFINE_ERROR(EigensolverFailure);
LPS_DEFINE_ERROR(NonlinearInducedAction);
LPS_DEFINE_ERROR(IndependenceCheckFailed);
LPS_DEFINE_ERROR(VerificationFailed);
LPS_DEFINE_ERROR(InjectivityFailure);
LPS_DEFINE_ERROR(JacobianDegenerateInterior);
LPS_DEFINE_ERROR(GradientUnavailable);
LPS_DEFINE_ERROR(JacobiViolation);
LPS_DEFINE_ERROR(NonPositiveCasimir);
LPS_DEFINE_ERROR(StepSizeRejected);
LPS_DEFINE_ERROR(MeshTooCoarse);
LPS_DEFINE_ERROR(GridEmpty);
LPS_DEFINE_ERROR(DomainMismatch);
LPS_DEFINE_ERROR(ReferenceMismatch);
LPS_DEFINE_ERROR(ParseError);

#undef LPS_DEFINE_ERROR

// ---------------------------------------------------------------------------
// Deterministic random numbers
// ---------------------------------------------------------------------------

// splitmix64; used both directly and to derive independent per-trial streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ^ 0x6a09e667f3bcc908ULL) {
    // warm up
    splitmix64(state_);
    splitmix64(state_);
  }

  // Stream for trial `index`, independent of how other trials consume theirs.
  static Rng for_trial(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed;
    splitmix64(s);
    s ^= 0x9e3779b97f4a7c15ULL * (index + 1);
    return Rng(s);
  }

  double uniform() {  // [0, 1)
    return static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = 0.0;
    while (u1 <= 1e-300) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(2.0 * M_PI * u2);
    has_cached_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  Vec gaussian_vector(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  std::uint64_t integer(std::uint64_t bound) { return splitmix64(state_) % bound; }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// ---------------------------------------------------------------------------
// Parallel loops (deterministic: each index writes its own slot)
// ---------------------------------------------------------------------------

inline int max_threads() {
  if (const char* env = std::getenv("CASIMIR_MODULI_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

inline void parallel_for(int n, const std::function<void(int)>& body) {
  int threads = std::min(max_threads(), n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::vector<std::exception_ptr> errors(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < n; i += threads) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

inline bool approx_equal(const Mat& a, const Mat& b, double tol) {
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

inline double rel_residual(double got, double expect) {
  return std::abs(got - expect) / (1.0 + std::abs(expect));
}

}  // namespace lps
