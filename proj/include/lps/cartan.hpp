#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "lps/algebra.hpp"

namespace lps {

// ---------------------------------------------------------------------------
// Cartan subalgebra
// ---------------------------------------------------------------------------

// The basis produced by build_algebra puts the Cartan generators first, so t
// is the span of e_0..e_{l-1} and t* sits inside g* as the first l
// coordinates (the inner product identifies g with g*).
struct CartanData {
  int rank = 0;
  int dim = 0;

  Vec embed(const Vec& t_coords) const {
    Vec v = Vec::Zero(dim);
    v.head(rank) = t_coords;
    return v;
  }
  Vec restrict(const Vec& xi) const { return xi.head(rank); }
};

struct RootSystemData {
  int rank = 0;
  std::vector<Vec> roots;         // all roots, in t* coordinates
  std::vector<Vec> simple_roots;  // l of them, lexicographic positivity
  Eigen::MatrixXi cartan_matrix;  // 2<a_i,a_j>/<a_j,a_j>
};

struct WeylGroupData {
  std::vector<Mat> elements;    // identity first, then breadth-first closure
  std::vector<Mat> generators;  // simple reflections
  std::size_t order() const { return elements.size(); }
};

struct OuterGroupData {
  std::vector<std::vector<int>> diagram_perms;  // on simple-root indices
  std::vector<Mat> elements_on_t;               // l x l orthogonal, chamber-preserving
  std::vector<Mat> elements_on_invariants;      // (l-1) x (l-1), filled by invariants
};

namespace detail {

inline bool lex_positive(const Vec& v, double tol = 1e-7) {
  for (int i = 0; i < v.size(); ++i) {
    if (v[i] > tol) return true;
    if (v[i] < -tol) return false;
  }
  return false;
}

inline bool vec_equal(const Vec& a, const Vec& b, double tol) {
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace detail

// Simultaneous eigenspace decomposition of ad(t) on the complexified algebra.
inline std::pair<CartanData, RootSystemData> compute_roots(const LieAlgebraData& alg) {
  const int l = alg.rank;
  const int d = alg.dim;
  CartanData cartan{l, d};

  std::vector<Mat> ad_t(l);
  for (int a = 0; a < l; ++a) {
    Vec ea = Vec::Zero(d);
    ea[a] = 1.0;
    ad_t[a] = alg.ad(ea);
  }

  // Abelian check.
  for (int a = 0; a < l; ++a)
    for (int b = a + 1; b < l; ++b)
      if ((ad_t[a].col(b)).cwiseAbs().maxCoeff() > 1e-12)
        throw CartanNotFound("t basis does not commute");

  // Maximal abelian: the joint kernel of ad(t) must be exactly t.
  {
    Mat stacked(l * d, d);
    for (int a = 0; a < l; ++a) stacked.middleRows(a * d, d) = ad_t[a];
    Eigen::JacobiSVD<Mat> svd(stacked);
    int kernel = 0;
    double smax = svd.singularValues()[0];
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] < 1e-9 * smax) ++kernel;
    kernel += d - static_cast<int>(svd.singularValues().size());
    if (kernel != l) throw CartanNotFound("centralizer of t has dimension " +
                                          std::to_string(kernel));
  }

  RootSystemData rs;
  rs.rank = l;

  Rng rng(0x5eed);
  for (int attempt = 0;; ++attempt) {
    if (attempt > 16) throw DegenerateEigenvalues("no separating combination found");
    Vec mix = rng.gaussian_vector(l);
    CMat combo = CMat::Zero(d, d);
    for (int a = 0; a < l; ++a) combo += Complex(mix[a], 0) * ad_t[a];
    Eigen::ComplexEigenSolver<CMat> es(combo);
    if (es.info() != Eigen::Success) continue;

    std::vector<Vec> roots;
    bool clean = true;
    for (int i = 0; i < d && clean; ++i) {
      CVec v = es.eigenvectors().col(i);
      if (std::abs(es.eigenvalues()[i]) < 1e-7) continue;  // Cartan directions
      Vec alpha(l);
      for (int a = 0; a < l; ++a) {
        Complex lam = (v.adjoint() * (ad_t[a] * v))(0, 0) / v.squaredNorm();
        alpha[a] = lam.imag();
        // must be a genuine simultaneous eigenvector
        if (((ad_t[a].cast<Complex>() * v) - Complex(0, alpha[a]) * v).norm() > 1e-7)
          clean = false;
      }
      roots.push_back(alpha);
    }
    if (!clean || static_cast<int>(roots.size()) != d - l) continue;

    std::sort(roots.begin(), roots.end(), [](const Vec& a, const Vec& b) {
      for (int i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > 1e-9) return a[i] < b[i];
      return false;
    });
    rs.roots = std::move(roots);
    break;
  }

  // Simple roots: positive roots not expressible as a sum of two positives.
  std::vector<Vec> positive;
  for (const Vec& r : rs.roots)
    if (detail::lex_positive(r)) positive.push_back(r);
  if (2 * positive.size() != rs.roots.size())
    throw DegenerateEigenvalues("root set not closed under negation");
  for (const Vec& r : positive) {
    bool decomposable = false;
    for (const Vec& b : positive) {
      for (const Vec& g : positive)
        if (detail::vec_equal(b + g, r, 1e-7)) {
          decomposable = true;
          break;
        }
      if (decomposable) break;
    }
    if (!decomposable) rs.simple_roots.push_back(r);
  }
  if (static_cast<int>(rs.simple_roots.size()) != l)
    throw DegenerateEigenvalues("expected " + std::to_string(l) + " simple roots, got " +
                                std::to_string(rs.simple_roots.size()));

  rs.cartan_matrix.resize(l, l);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) {
      double v = 2.0 * rs.simple_roots[i].dot(rs.simple_roots[j]) /
                 rs.simple_roots[j].squaredNorm();
      int n = static_cast<int>(std::lround(v));
      if (std::abs(v - n) > 1e-6)
        throw DegenerateEigenvalues("non-integral Cartan matrix entry");
      rs.cartan_matrix(i, j) = n;
    }
  return {cartan, rs};
}

// ---------------------------------------------------------------------------
// Weyl group
// ---------------------------------------------------------------------------

inline Mat reflection_matrix(const Vec& alpha) {
  const int l = static_cast<int>(alpha.size());
  return Mat::Identity(l, l) - (2.0 / alpha.squaredNorm()) * (alpha * alpha.transpose());
}

inline WeylGroupData weyl_group(const RootSystemData& rs) {
  const int l = rs.rank;
  WeylGroupData w;
  for (const Vec& a : rs.simple_roots) w.generators.push_back(reflection_matrix(a));

  auto contains = [&](const Mat& m) {
    for (const Mat& e : w.elements)
      if (approx_equal(e, m, 1e-9)) return true;
    return false;
  };

  w.elements.push_back(Mat::Identity(l, l));
  for (std::size_t head = 0; head < w.elements.size(); ++head) {
    Mat current = w.elements[head];  // copy: the vector reallocates below
    for (const Mat& g : w.generators) {
      Mat next = g * current;
      if (!contains(next)) w.elements.push_back(next);
    }
    if (w.elements.size() > 1000000) throw ClosureOverflow("Weyl closure exceeded bound");
  }

  // every element must permute the root set exactly
  for (const Mat& e : w.elements)
    for (const Vec& r : rs.roots) {
      Vec img = e * r;
      bool found = false;
      for (const Vec& s : rs.roots)
        if (detail::vec_equal(img, s, 1e-9)) {
          found = true;
          break;
        }
      if (!found) throw VerificationFailed("Weyl element does not preserve the roots");
    }
  return w;
}

inline bool is_dominant(const RootSystemData& rs, const Vec& xi_t, double tol = 1e-9) {
  for (const Vec& a : rs.simple_roots)
    if (xi_t.dot(a) < -tol * (1.0 + xi_t.norm())) return false;
  return true;
}

struct ChamberProjection {
  int weyl_index = 0;  // index into WeylGroupData::elements
  Vec dominant;
};

// First closure element (in the fixed enumeration order) mapping xi_t into
// the closed dominant chamber; identity wins on already-dominant input.
inline ChamberProjection chamber_project(const RootSystemData& rs, const WeylGroupData& w,
                                         const Vec& xi_t) {
  for (int i = 0; i < static_cast<int>(w.elements.size()); ++i) {
    Vec img = w.elements[i] * xi_t;
    if (is_dominant(rs, img)) return {i, img};
  }
  throw VerificationFailed("no Weyl image is dominant (closure incomplete?)");
}

// Fundamental weights: dual basis to the simple coroots; their nonnegative
// span is the closed dominant chamber.
inline std::vector<Vec> fundamental_weights(const RootSystemData& rs) {
  const int l = rs.rank;
  Mat coroots(l, l);
  for (int j = 0; j < l; ++j)
    coroots.row(j) = (2.0 / rs.simple_roots[j].squaredNorm()) * rs.simple_roots[j].transpose();
  Mat winv = coroots.inverse();
  std::vector<Vec> weights;
  for (int i = 0; i < l; ++i) weights.push_back(winv.col(i));
  return weights;
}

// Strictly dominant reference point (sum of the fundamental weights).
inline Vec dominant_regular_point(const RootSystemData& rs) {
  Vec rho = Vec::Zero(rs.rank);
  for (const Vec& w : fundamental_weights(rs)) rho += w;
  return rho;
}

// ---------------------------------------------------------------------------
// Leaf dimension / regularity
// ---------------------------------------------------------------------------

struct RegularityReport {
  bool regular = false;
  int leaf_dimension = 0;  // rank of pi_ij(xi)
};

inline RegularityReport is_regular(const LieAlgebraData& alg, const Vec& xi) {
  Mat p = alg.poisson_matrix(xi);
  Eigen::JacobiSVD<Mat> svd(p);
  double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  int rank = 0;
  if (smax > 0)
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] > 1e-9 * smax) ++rank;
  return {rank == alg.dim - alg.rank, rank};
}

// ---------------------------------------------------------------------------
// to_chamber: the inverse orbit chart. Every coadjoint orbit meets the closed
// chamber exactly once; we locate that representative by eigenvalue
// extraction of the matrix realization and return a conjugator word g with
// Ad_g^dagger(xi_dom) = xi.
// ---------------------------------------------------------------------------

struct ChamberChart {
  Vec dominant_t;        // representative in t* coordinates
  GroupWord conjugator;  // Ad^dagger along this word maps embed(dominant_t) to xi
};

namespace detail {

inline double pfaffian_real(Mat m) {
  const int n = static_cast<int>(m.rows());
  if (n % 2 != 0) return 0.0;
  if (n == 0) return 1.0;
  // recursive expansion along the first row
  double total = 0.0;
  for (int j = 1; j < n; ++j) {
    double sign = (j % 2 == 1) ? 1.0 : -1.0;
    Mat sub(n - 2, n - 2);
    int ri = 0;
    for (int r = 1; r < n; ++r) {
      if (r == j) continue;
      int ci = 0;
      for (int c = 1; c < n; ++c) {
        if (c == j) continue;
        sub(ri, ci++) = m(r, c);
      }
      ++ri;
    }
    total += sign * m(0, j) * pfaffian_real(sub);
  }
  return total;
}

// Ranking pattern of the canonical form, read off a strictly dominant point:
// which slot takes the k-th largest parameter, and with which sign.
struct CanonicalPattern {
  std::vector<int> slot;     // slot[k] = position receiving the k-th largest |value|
  std::vector<double> sign;  // sign to apply at that position
};

inline CanonicalPattern ranking_pattern(const Vec& reference) {
  const int n = static_cast<int>(reference.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return std::abs(reference[a]) > std::abs(reference[b]);
  });
  CanonicalPattern p;
  for (int k = 0; k < n; ++k) {
    p.slot.push_back(idx[k]);
    p.sign.push_back(reference[idx[k]] >= 0 ? 1.0 : -1.0);
  }
  return p;
}

// Principal logarithm of a unitary matrix via complex Schur form. Fails (returns
// nullopt) near the branch cut or when the triangular factor is not numerically
// diagonal.
inline std::optional<CMat> unitary_log(const CMat& u, bool traceless) {
  Eigen::ComplexSchur<CMat> schur(u);
  if (schur.info() != Eigen::Success) return std::nullopt;
  const CMat& t = schur.matrixT();
  const int n = static_cast<int>(u.rows());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(t(i, j)) > 1e-8) return std::nullopt;
  std::vector<double> theta(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    theta[i] = std::arg(t(i, i));
    if (std::abs(theta[i] - M_PI) < 0.05 || std::abs(theta[i] + M_PI) < 0.05)
      return std::nullopt;  // branch cut
    sum += theta[i];
  }
  if (traceless) {
    int k = static_cast<int>(std::lround(sum / (2.0 * M_PI)));
    while (k > 0) {
      *std::max_element(theta.begin(), theta.end()) -= 2.0 * M_PI;
      --k;
    }
    while (k < 0) {
      *std::min_element(theta.begin(), theta.end()) += 2.0 * M_PI;
      ++k;
    }
  }
  CVec d(n);
  for (int i = 0; i < n; ++i) d[i] = Complex(0, theta[i]);
  return CMat(schur.matrixU() * d.asDiagonal() * schur.matrixU().adjoint());
}

}  // namespace detail

inline ChamberChart to_chamber(const LieAlgebraData& alg, const CartanData& cartan,
                               const RootSystemData& rs, const Vec& xi) {
  alg.check_dim(xi);
  const int l = alg.rank;
  const int n = alg.matrix_size;
  const CMat m = alg.realize(xi);

  Eigen::SelfAdjointEigenSolver<CMat> es(Complex(0, -1) * m);
  if (es.info() != Eigen::Success) throw EigensolverFailure("to_chamber");
  // eigenvalues mu ascending with orthonormal eigenvectors; M v = i mu v
  const Vec mu = es.eigenvalues();
  const CMat v = es.eigenvectors();

  const Vec rho_t = dominant_regular_point(rs);
  CMat u = CMat::Zero(n, n);
  Vec eta_t;  // dominant representative, t* coordinates

  if (alg.family == Family::A) {
    // pattern of diagonal entries of a strictly dominant matrix
    CMat rho_m = alg.realize(cartan.embed(rho_t));
    Vec ref(n);
    for (int j = 0; j < n; ++j) ref[j] = rho_m(j, j).imag();
    std::vector<int> slot(n);
    {
      std::vector<int> idx(n);
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end(), [&](int a, int b) { return ref[a] > ref[b]; });
      for (int k = 0; k < n; ++k) slot[k] = idx[k];
    }
    // k-th largest eigenvalue goes to diagonal position slot[k]
    CMat diag = CMat::Zero(n, n);
    for (int k = 0; k < n; ++k) {
      int eig_index = n - 1 - k;  // mu ascending
      diag(slot[k], slot[k]) = Complex(0, mu[eig_index]);
      u.col(slot[k]) = v.col(eig_index);
    }
    Complex det = u.determinant();
    u *= std::exp(Complex(0, -std::arg(det) / n));
    eta_t = cartan.restrict(alg.coords_of(diag));
  } else {
    // Canonical block parameters live on the Cartan slots; the pattern comes
    // from the dominant reference point.
    auto pattern = detail::ranking_pattern(rho_t);

    // positive-eigenvalue half of the spectrum, largest first
    std::vector<int> pos;
    for (int i = n - 1; i >= 0; --i)
      if (static_cast<int>(pos.size()) < l) pos.push_back(i);
    // assemble parameters: |mu| ranked into slots with the reference signs
    Vec params = Vec::Zero(l);
    std::vector<int> eig_of_slot(l);
    for (int k = 0; k < l; ++k) {
      params[pattern.slot[k]] = pattern.sign[k] * std::max(mu[pos[k]], 0.0);
      eig_of_slot[pattern.slot[k]] = pos[k];
    }

    if (alg.family == Family::D) {
      // Pfaffian sign is an SO-invariant; fix the smallest parameter.
      double pf = detail::pfaffian_real(m.real());
      double prod = 1.0;
      for (int a = 0; a < l; ++a) prod *= params[a];
      if (pf * prod < 0) {
        int smallest = pattern.slot[l - 1];
        params[smallest] = -params[smallest];
      }
    }

    if (alg.family == Family::B || alg.family == Family::D) {
      for (int a = 0; a < l; ++a) {
        const CVec w = v.col(eig_of_slot[a]);
        Vec re = std::sqrt(2.0) * w.real();
        Vec im = std::sqrt(2.0) * w.imag();
        if (mu[eig_of_slot[a]] < 1e-9 * (1.0 + mu.cwiseAbs().maxCoeff())) {
          // zero block: use a real orthonormal pair from the kernel
          re = w.real().norm() > 0.5 ? Vec(w.real()) : Vec(w.imag());
          re.normalize();
          // imaginary partner: any kernel vector orthogonal to re; fall back
          // to Gram-Schmidt over Re/Im parts of nearby kernel vectors
          im = w.imag() - w.imag().dot(re) * re;
          if (im.norm() < 1e-6) {
            // search other near-zero eigenvectors
            for (int i = 0; i < n && im.norm() < 1e-6; ++i) {
              if (std::abs(mu[i]) > 1e-9 * (1.0 + mu.cwiseAbs().maxCoeff())) continue;
              for (Vec cand : {Vec(v.col(i).real()), Vec(v.col(i).imag())}) {
                cand -= cand.dot(re) * re;
                for (int b = 0; b < a; ++b) {
                  cand -= cand.dot(u.col(2 * b).real()) * u.col(2 * b).real();
                  cand -= cand.dot(u.col(2 * b + 1).real()) * u.col(2 * b + 1).real();
                }
                if (cand.norm() > 1e-6) {
                  im = cand;
                  break;
                }
              }
            }
          }
          if (im.norm() < 1e-6) throw EigensolverFailure("kernel pairing failed");
          im.normalize();
        }
        // target parameter p: M u1 = -p u2, M u2 = p u1; the +|mu| eigenvector
        // gives (re, im); a negative parameter swaps the pair.
        if (params[a] >= 0) {
          u.col(2 * a) = re.cast<Complex>();
          u.col(2 * a + 1) = im.cast<Complex>();
        } else {
          u.col(2 * a) = im.cast<Complex>();
          u.col(2 * a + 1) = re.cast<Complex>();
        }
      }
      if (alg.family == Family::B) {
        // kernel line: eigenvalue closest to zero
        int zi = 0;
        for (int i = 0; i < n; ++i)
          if (std::abs(mu[i]) < std::abs(mu[zi])) zi = i;
        Vec z = v.col(zi).real().norm() > 0.5 ? Vec(v.col(zi).real()) : Vec(v.col(zi).imag());
        z.normalize();
        u.col(n - 1) = z.cast<Complex>();
        if (u.real().determinant() < 0) u.col(n - 1) = -u.col(n - 1);
      } else if (u.real().determinant() < 0) {
        // Only possible at a Pfaffian-degenerate (wall) point: reorient the
        // smallest block.
        int a = pattern.slot[l - 1];
        params[a] = -params[a];
        u.col(2 * a).swap(u.col(2 * a + 1));
      }
    } else {  // Family C, quaternionic columns (x | -J conj(x))
      Mat jr = Mat::Zero(n, n);
      jr.topRightCorner(l, l) = Mat::Identity(l, l);
      jr.bottomLeftCorner(l, l) = -Mat::Identity(l, l);
      CMat j = jr.cast<Complex>();
      for (int a = 0; a < l; ++a) {
        CVec x = v.col(eig_of_slot[a]);
        if (params[a] < 0) x = -j * x.conjugate();  // eigenvector for -i|mu|
        if (std::abs(params[a]) < 1e-9 * (1.0 + mu.cwiseAbs().maxCoeff())) {
          // zero block: quaternionic Gram-Schmidt against earlier columns
          for (int b = 0; b < a; ++b) {
            x -= (u.col(b).adjoint() * x)(0, 0) * u.col(b);
            CVec w = -j * u.col(b).conjugate();
            x -= (w.adjoint() * x)(0, 0) * w;
          }
          if (x.norm() < 1e-6) throw EigensolverFailure("quaternionic pairing failed");
          x.normalize();
        }
        u.col(a) = x;
        u.col(l + a) = -j * x.conjugate();
      }
    }
    Vec param_t = std::sqrt(2.0) * params;  // block parameter mu = h/sqrt(2)
    eta_t = param_t;
  }

  // Consistency: u must conjugate the canonical form back to xi's matrix.
  const CMat eta_m = alg.realize(cartan.embed(eta_t));
  if ((u * eta_m * u.adjoint() - m).cwiseAbs().maxCoeff() >
      1e-7 * (1.0 + xi.norm()))
    throw EigensolverFailure("canonical form reconstruction failed");
  if (!is_dominant(rs, eta_t, 1e-7 * (1.0 + xi.norm())))
    throw EigensolverFailure("canonical representative not dominant");

  // Extract a one-exponential word; retry with stabilizer twists when the
  // principal log sits on the branch cut.
  Rng rng(0xc0ad);
  for (int attempt = 0; attempt < 64; ++attempt) {
    CMat u_try = u;
    if (attempt > 0) {
      Vec h = rng.gaussian_vector(l);
      u_try = u * exp_antihermitian(alg.realize(cartan.embed(h)));
    }
    auto log = detail::unitary_log(u_try, alg.family == Family::A);
    if (!log) continue;
    Vec x = alg.coords_of(*log);
    if ((alg.realize(x) - *log).cwiseAbs().maxCoeff() > 1e-8) continue;
    if ((exp_antihermitian(alg.realize(x)) - u_try).cwiseAbs().maxCoeff() > 1e-8) continue;
    return {eta_t, GroupWord{{x, 1.0}}};
  }
  throw EigensolverFailure("no conjugator word found");
}

// ---------------------------------------------------------------------------
// Outer automorphisms acting on t* (Dynkin diagram symmetries extended
// linearly; each representative preserves the closed chamber).
// ---------------------------------------------------------------------------

inline OuterGroupData outer_on_t(const RootSystemData& rs) {
  const int l = rs.rank;
  OuterGroupData out;

  std::vector<int> perm(l);
  std::iota(perm.begin(), perm.end(), 0);
  Mat s(l, l);
  for (int j = 0; j < l; ++j) s.col(j) = rs.simple_roots[j];
  Mat sinv = s.inverse();

  do {
    bool ok = true;
    for (int i = 0; i < l && ok; ++i)
      for (int j = 0; j < l && ok; ++j)
        if (rs.cartan_matrix(perm[i], perm[j]) != rs.cartan_matrix(i, j)) ok = false;
    if (!ok) continue;
    Mat sp(l, l);
    for (int j = 0; j < l; ++j) sp.col(j) = rs.simple_roots[perm[j]];
    Mat f = sp * sinv;
    if ((f.transpose() * f - Mat::Identity(l, l)).cwiseAbs().maxCoeff() > 1e-9)
      continue;  // length-changing permutation (non-simply-laced): not in Aut(Phi)
    out.diagram_perms.push_back(perm);
    out.elements_on_t.push_back(f);
  } while (std::next_permutation(perm.begin(), perm.end()));

  // identity first for a stable order
  for (std::size_t i = 0; i < out.elements_on_t.size(); ++i)
    if (approx_equal(out.elements_on_t[i], Mat::Identity(l, l), 1e-12)) {
      std::swap(out.elements_on_t[0], out.elements_on_t[i]);
      std::swap(out.diagram_perms[0], out.diagram_perms[i]);
      break;
    }
  return out;
}

}  // namespace lps
