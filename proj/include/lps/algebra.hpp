#pragma once

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "lps/common.hpp"

namespace lps {

// Classical compact families: A -> su(l+1), B -> so(2l+1), C -> sp(l),
// D -> so(2l).
enum class Family { A, B, C, D };

inline char family_letter(Family f) {
  switch (f) {
    case Family::A: return 'A';
    case Family::B: return 'B';
    case Family::C: return 'C';
    case Family::D: return 'D';
  }
  return '?';
}

inline Family family_from_letter(char c) {
  switch (c) {
    case 'A': return Family::A;
    case 'B': return Family::B;
    case 'C': return Family::C;
    case 'D': return Family::D;
  }
  throw UnsupportedFamily(std::string("unknown family '") + c + "'");
}

struct LieAlgebraSpec {
  Family family = Family::A;
  int rank = 1;
  double tol = 1e-12;
};

// Inner product on anti-Hermitian matrices: (A,B) = -tr(AB), always real.
inline double trace_form(const CMat& a, const CMat& b) {
  return -(a * b).trace().real();
}

struct LieAlgebraData {
  Family family;
  int rank;            // l
  int dim;             // dim g
  int matrix_size;     // size of the defining realization
  bool simple;         // false only for so(4)
  std::vector<CMat> basis;          // orthonormal under -tr(AB)
  std::vector<Mat> structure;       // structure[k](i,j) = c[i][j][k]
  Mat inner_product;                // identity by construction

  double c(int i, int j, int k) const { return structure[k](i, j); }

  // Matrix realization of a coordinate vector (g and g* are identified
  // through the orthonormal basis).
  CMat realize(const Vec& coords) const {
    check_dim(coords);
    CMat m = CMat::Zero(matrix_size, matrix_size);
    for (int i = 0; i < dim; ++i) m += coords[i] * basis[i];
    return m;
  }

  Vec coords_of(const CMat& m) const {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = trace_form(m, basis[i]);
    return v;
  }

  Vec bracket(const Vec& x, const Vec& y) const {
    check_dim(x);
    check_dim(y);
    Vec r = Vec::Zero(dim);
    for (int k = 0; k < dim; ++k) r[k] = x.dot(structure[k] * y);
    return r;
  }

  // ad(x) in coordinates: ad(x) y = [x, y].
  Mat ad(const Vec& x) const {
    Mat m(dim, dim);
    for (int k = 0; k < dim; ++k) m.row(k) = (x.transpose() * structure[k]);
    return m;
  }

  // Lie-Poisson bivector matrix pi_ij(xi) = sum_k c[i][j][k] xi_k.
  Mat poisson_matrix(const Vec& xi) const {
    check_dim(xi);
    Mat p = Mat::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) p += xi[k] * structure[k];
    return p;
  }

  void check_dim(const Vec& v) const {
    if (v.size() != dim)
      throw DimensionMismatch("expected " + std::to_string(dim) +
                              " coordinates, got " + std::to_string(v.size()));
  }
};

// exp(M) for anti-Hermitian M, through the Hermitian eigendecomposition of
// -iM; the result is exactly unitary up to roundoff.
inline CMat exp_antihermitian(const CMat& m) {
  CMat h = Complex(0, -1) * m;
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  if (es.info() != Eigen::Success) throw EigensolverFailure("exp_antihermitian");
  CVec phases(es.eigenvalues().size());
  for (int i = 0; i < phases.size(); ++i)
    phases[i] = std::exp(Complex(0, es.eigenvalues()[i]));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// A group element given as a product of exponentials exp(t_1 X_1)...exp(t_k X_k).
using GroupWord = std::vector<std::pair<Vec, double>>;

inline CMat realize_word(const LieAlgebraData& alg, const GroupWord& word) {
  CMat g = CMat::Identity(alg.matrix_size, alg.matrix_size);
  for (const auto& [x, t] : word) g *= exp_antihermitian(t * alg.realize(x));
  return g;
}

// Ad_g^dagger(xi) = xi o Ad_{g^{-1}}; in the orthonormal coordinates this is
// conjugation of the matrix realization: M(xi) -> g M(xi) g^*.
inline Vec coadjoint_apply(const LieAlgebraData& alg, const GroupWord& word,
                           const Vec& xi) {
  alg.check_dim(xi);
  CMat g = realize_word(alg, word);
  return alg.coords_of(g * alg.realize(xi) * g.adjoint());
}

namespace detail {

inline std::vector<CMat> raw_basis_su(int n) {
  std::vector<CMat> raw;
  const Complex I(0, 1);
  // Cartan first: i * diag(1,..,1,-m,0,..)/sqrt(m(m+1)).
  for (int m = 1; m < n; ++m) {
    CMat d = CMat::Zero(n, n);
    for (int j = 0; j < m; ++j) d(j, j) = I;
    d(m, m) = -I * static_cast<double>(m);
    raw.push_back(d / std::sqrt(static_cast<double>(m) * (m + 1)));
  }
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      CMat a = CMat::Zero(n, n);
      a(j, k) = 1;
      a(k, j) = -1;
      raw.push_back(a / std::sqrt(2.0));
      CMat b = CMat::Zero(n, n);
      b(j, k) = I;
      b(k, j) = I;
      raw.push_back(b / std::sqrt(2.0));
    }
  return raw;
}

inline std::vector<CMat> raw_basis_so(int m, int rank) {
  std::vector<CMat> raw;
  auto rot = [&](int j, int k) {
    CMat a = CMat::Zero(m, m);
    a(j, k) = 1;
    a(k, j) = -1;
    return CMat(a / std::sqrt(2.0));
  };
  // Cartan first: the block rotations in planes (0,1), (2,3), ...
  for (int a = 0; a < rank; ++a) raw.push_back(rot(2 * a, 2 * a + 1));
  for (int j = 0; j < m; ++j)
    for (int k = j + 1; k < m; ++k) {
      if (k == j + 1 && j % 2 == 0 && j / 2 < rank) continue;
      raw.push_back(rot(j, k));
    }
  return raw;
}

// sp(l) realized as 2l x 2l complex matrices [[X, Y], [-conj(Y), conj(X)]]
// with X anti-Hermitian and Y symmetric.
inline std::vector<CMat> raw_basis_sp(int l) {
  const int n = 2 * l;
  const Complex I(0, 1);
  std::vector<CMat> raw;
  auto embed = [&](const CMat& x, const CMat& y) {
    CMat m = CMat::Zero(n, n);
    m.topLeftCorner(l, l) = x;
    m.topRightCorner(l, l) = y;
    m.bottomLeftCorner(l, l) = -y.conjugate();
    m.bottomRightCorner(l, l) = x.conjugate();
    return m;
  };
  CMat zl = CMat::Zero(l, l);
  // Cartan first: X = i E_aa.
  for (int a = 0; a < l; ++a) {
    CMat x = zl;
    x(a, a) = I;
    raw.push_back(embed(x, zl) / std::sqrt(2.0));
  }
  for (int a = 0; a < l; ++a)
    for (int b = a + 1; b < l; ++b) {
      CMat x = zl;
      x(a, b) = 1;
      x(b, a) = -1;
      raw.push_back(embed(x, zl) / 2.0);
      x = zl;
      x(a, b) = I;
      x(b, a) = I;
      raw.push_back(embed(x, zl) / 2.0);
    }
  for (int a = 0; a < l; ++a) {
    CMat y = zl;
    y(a, a) = 1;
    raw.push_back(embed(zl, y) / std::sqrt(2.0));
    y(a, a) = I;
    raw.push_back(embed(zl, y) / std::sqrt(2.0));
  }
  for (int a = 0; a < l; ++a)
    for (int b = a + 1; b < l; ++b) {
      CMat y = zl;
      y(a, b) = 1;
      y(b, a) = 1;
      raw.push_back(embed(zl, y) / 2.0);
      y = zl;
      y(a, b) = I;
      y(b, a) = I;
      raw.push_back(embed(zl, y) / 2.0);
    }
  return raw;
}

}  // namespace detail

inline LieAlgebraData build_algebra(const LieAlgebraSpec& spec) {
  if (spec.rank < 1) throw RankOutOfRange("rank must be >= 1");
  const int l = spec.rank;

  LieAlgebraData alg;
  alg.family = spec.family;
  alg.rank = l;
  alg.simple = true;

  std::vector<CMat> raw;
  switch (spec.family) {
    case Family::A:
      alg.matrix_size = l + 1;
      alg.dim = (l + 1) * (l + 1) - 1;
      raw = detail::raw_basis_su(l + 1);
      break;
    case Family::B:
      alg.matrix_size = 2 * l + 1;
      alg.dim = l * (2 * l + 1);
      raw = detail::raw_basis_so(2 * l + 1, l);
      break;
    case Family::C:
      alg.matrix_size = 2 * l;
      alg.dim = l * (2 * l + 1);
      raw = detail::raw_basis_sp(l);
      break;
    case Family::D:
      if (l < 2) throw RankOutOfRange("family D requires rank >= 2");
      alg.matrix_size = 2 * l;
      alg.dim = l * (2 * l - 1);
      raw = detail::raw_basis_so(2 * l, l);
      alg.simple = (l != 2);  // so(4) = su(2) + su(2)
      break;
  }
  if (static_cast<int>(raw.size()) != alg.dim)
    throw Error("internal: basis count mismatch");

  // Modified Gram-Schmidt under -tr(AB); the raw sets are already orthogonal,
  // this pins orthonormality at machine precision.
  alg.basis.reserve(alg.dim);
  for (CMat v : raw) {
    for (const CMat& e : alg.basis) v -= trace_form(v, e) * e;
    double norm = std::sqrt(trace_form(v, v));
    if (norm < 1e-10) throw Error("internal: degenerate raw basis");
    alg.basis.push_back(v / norm);
  }

  alg.inner_product = Mat::Identity(alg.dim, alg.dim);

  alg.structure.assign(alg.dim, Mat::Zero(alg.dim, alg.dim));
  for (int i = 0; i < alg.dim; ++i)
    for (int j = i + 1; j < alg.dim; ++j) {
      CMat br = alg.basis[i] * alg.basis[j] - alg.basis[j] * alg.basis[i];
      for (int k = 0; k < alg.dim; ++k) {
        double ck = trace_form(br, alg.basis[k]);
        alg.structure[k](i, j) = ck;
        alg.structure[k](j, i) = -ck;  // antisymmetry exact
      }
    }
  return alg;
}

// Residual diagnostics for the structure-constant axioms.
struct AlgebraAxiomReport {
  double antisymmetry = 0.0;   // exact zero by construction
  double jacobi = 0.0;         // max Jacobi residual over basis triples
  double ad_invariance = 0.0;  // max |<[x,y],z> + <y,[x,z]>| over basis triples
};

inline AlgebraAxiomReport check_algebra_axioms(const LieAlgebraData& alg) {
  AlgebraAxiomReport rep;
  const int d = alg.dim;
  for (int k = 0; k < d; ++k)
    rep.antisymmetry = std::max(
        rep.antisymmetry,
        (alg.structure[k] + alg.structure[k].transpose()).cwiseAbs().maxCoeff());
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = j + 1; k < d; ++k)
        for (int n = 0; n < d; ++n) {
          double s = 0.0;
          for (int m = 0; m < d; ++m)
            s += alg.c(i, j, m) * alg.c(m, k, n) + alg.c(j, k, m) * alg.c(m, i, n) +
                 alg.c(k, i, m) * alg.c(m, j, n);
          rep.jacobi = std::max(rep.jacobi, std::abs(s));
        }
  // <[e_i,e_j],e_k> + <e_j,[e_i,e_k]> = c[i][j][k] + c[i][k][j]
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        rep.ad_invariance =
            std::max(rep.ad_invariance, std::abs(alg.c(i, j, k) + alg.c(i, k, j)));
  return rep;
}

}  // namespace lps
