#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "lps/common.hpp"

namespace lps {

// Sparse multivariate polynomial with real coefficients. Exponent vectors are
// kept at a fixed length (the number of variables), terms below `coeff_eps`
// are dropped on normalization.
class Poly {
 public:
  using Key = std::vector<int>;

  Poly() : nvars_(0) {}
  explicit Poly(int nvars) : nvars_(nvars) {}

  static Poly constant(int nvars, double c) {
    Poly p(nvars);
    if (c != 0.0) p.terms_[Key(nvars, 0)] = c;
    return p;
  }

  static Poly variable(int nvars, int i) {
    Poly p(nvars);
    Key k(nvars, 0);
    k[i] = 1;
    p.terms_[k] = 1.0;
    return p;
  }

  static Poly linear_form(const Vec& coeffs) {
    Poly p(static_cast<int>(coeffs.size()));
    for (int i = 0; i < coeffs.size(); ++i) {
      if (coeffs[i] != 0.0) {
        Key k(p.nvars_, 0);
        k[i] = 1;
        p.terms_[k] = coeffs[i];
      }
    }
    return p;
  }

  int nvars() const { return nvars_; }
  const std::map<Key, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& [k, c] : terms_) {
      int s = 0;
      for (int e : k) s += e;
      d = std::max(d, s);
    }
    return d;
  }

  Poly& operator+=(const Poly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r(a.nvars_);
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) {
        Key k(a.nvars_);
        for (int i = 0; i < a.nvars_; ++i) k[i] = ka[i] + kb[i];
        r.add_term(k, ca * cb);
      }
    return r;
  }

  friend Poly operator*(double s, Poly p) {
    for (auto& [k, c] : p.terms_) c *= s;
    p.prune();
    return p;
  }

  Poly pow(int e) const {
    Poly r = constant(nvars_, 1.0);
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
  }

  double eval(const Vec& x) const {
    double r = 0.0;
    for (const auto& [k, c] : terms_) {
      double t = c;
      for (int i = 0; i < nvars_; ++i)
        for (int e = 0; e < k[i]; ++e) t *= x[i];
      r += t;
    }
    return r;
  }

  // Evaluation over any ring element supporting * and + with double (used for
  // dual-number gradients).
  template <typename T>
  T eval_generic(const std::vector<T>& x, const T& zero, const T& one) const {
    T r = zero;
    for (const auto& [k, c] : terms_) {
      T t = one;
      for (int i = 0; i < nvars_; ++i)
        for (int e = 0; e < k[i]; ++e) t = t * x[i];
      r = r + c * t;
    }
    return r;
  }

  Poly derivative(int i) const {
    Poly r(nvars_);
    for (const auto& [k, c] : terms_) {
      if (k[i] == 0) continue;
      Key kk = k;
      kk[i] -= 1;
      r.add_term(kk, c * k[i]);
    }
    return r;
  }

  Vec gradient(const Vec& x) const {
    Vec g(nvars_);
    for (int i = 0; i < nvars_; ++i) g[i] = derivative(i).eval(x);
    return g;
  }

  // Substitute x_i -> linear combination given by column i of A (x = A y).
  Poly compose_linear(const Mat& A) const {
    int m = static_cast<int>(A.cols());
    Poly r(m);
    for (const auto& [k, c] : terms_) {
      Poly t = Poly::constant(m, c);
      for (int i = 0; i < nvars_; ++i) {
        if (k[i] == 0) continue;
        Poly lf = Poly::linear_form(A.row(i).transpose());
        t = t * lf.pow(k[i]);
      }
      r += t;
    }
    return r;
  }

  // Integral over the unit sphere S^{nvars-1} of this polynomial, using the
  // closed form for monomials:
  //   \int x^{2a} dS = 2 * prod Gamma(a_i + 1/2) / Gamma(sum a_i + n/2),
  // zero for any odd exponent.
  double sphere_integral() const {
    double total = 0.0;
    for (const auto& [k, c] : terms_) {
      bool odd = false;
      for (int e : k)
        if (e % 2 != 0) {
          odd = true;
          break;
        }
      if (odd) continue;
      double lg = 0.0;
      double half_sum = 0.0;
      for (int e : k) {
        double a = e / 2.0;
        lg += std::lgamma(a + 0.5);
        half_sum += a;
      }
      lg -= std::lgamma(half_sum + nvars_ / 2.0);
      total += c * 2.0 * std::exp(lg);
    }
    return total;
  }

  // L2 inner product on the unit sphere.
  double sphere_dot(const Poly& o) const { return (*this * o).sphere_integral(); }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

 private:
  void add_term(const Key& k, double c) {
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      if (c != 0.0) terms_[k] = c;
    } else {
      it->second += c;
      if (std::abs(it->second) < coeff_eps_) terms_.erase(it);
    }
  }

  void prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (std::abs(it->second) < coeff_eps_)
        it = terms_.erase(it);
      else
        ++it;
    }
  }

  static constexpr double coeff_eps_ = 1e-300;

  int nvars_;
  std::map<Key, double> terms_;
};

}  // namespace lps
