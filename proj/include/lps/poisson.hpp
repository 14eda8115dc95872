#pragma once

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lps/invariants.hpp"

namespace lps {

// ---------------------------------------------------------------------------
// Pointwise bivector evaluation
// ---------------------------------------------------------------------------

struct PoissonEvaluation {
  Vec point;
  Mat matrix;               // pi_ij(xi) = sum_k c[i][j][k] xi_k
  double conformal_factor;  // 1 for the linear structure, f(xi) for deformations
};

// Positive rescaling factor for conformal deformations. Built by the moduli
// layer from a Casimir model; any callable constant on coadjoint orbits works.
using ConformalFactor = std::function<double(const Vec&)>;

inline PoissonEvaluation poisson_eval(const LieAlgebraData& alg, const Vec& xi,
                                      const ConformalFactor* deformation = nullptr) {
  PoissonEvaluation ev;
  ev.point = xi;
  ev.matrix = alg.poisson_matrix(xi);
  ev.conformal_factor = deformation ? (*deformation)(xi) : 1.0;
  return ev;
}

// ---------------------------------------------------------------------------
// Function models: value plus gradient
// ---------------------------------------------------------------------------

struct FunctionModel {
  int dim = 0;
  bool exact_gradient = false;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;  // empty => GradientUnavailable
};

inline Vec fm_grad(const FunctionModel& f, const Vec& xi) {
  if (!f.gradient) throw GradientUnavailable("function model has no gradient");
  return f.gradient(xi);
}

inline FunctionModel fm_constant(int dim, double c) {
  return {dim, true, [c](const Vec&) { return c; },
          [dim](const Vec&) { return Vec::Zero(dim).eval(); }};
}

inline FunctionModel fm_linear(const Vec& a) {
  int dim = static_cast<int>(a.size());
  return {dim, true, [a](const Vec& xi) { return a.dot(xi); },
          [a](const Vec&) { return a; }};
}

inline FunctionModel fm_coordinate(int dim, int i) {
  Vec a = Vec::Zero(dim);
  a[i] = 1.0;
  return fm_linear(a);
}

inline FunctionModel fm_polynomial(const Poly& p) {
  return {p.nvars(), true, [p](const Vec& xi) { return p.eval(xi); },
          [p](const Vec& xi) { return p.gradient(xi); }};
}

inline FunctionModel fm_product(const FunctionModel& f, const FunctionModel& g) {
  return {f.dim, f.exact_gradient && g.exact_gradient,
          [f, g](const Vec& xi) { return f.value(xi) * g.value(xi); },
          [f, g](const Vec& xi) {
            return (f.value(xi) * fm_grad(g, xi) + g.value(xi) * fm_grad(f, xi)).eval();
          }};
}

// invariant generator p_i as a function model (the model must outlive it)
inline FunctionModel fm_invariant(const Model& m, int i) {
  const Model* mp = &m;
  return {m.alg.dim, true,
          [mp, i](const Vec& xi) { return eval_p(mp->inv, mp->alg, xi)[i]; },
          [mp, i](const Vec& xi) {
            auto [p, grads] = eval_p_with_grad(mp->inv, mp->alg, xi);
            return grads.row(i).transpose().eval();
          }};
}

// G(xi) = f(xi/|xi|); the canonical extension of a sphere function. Gradient
// is tangential: (I - n n^T) grad f(n) / |xi| with n = xi/|xi|.
inline FunctionModel fm_zero_homogeneous(const FunctionModel& f) {
  return {f.dim, f.exact_gradient,
          [f](const Vec& xi) { return f.value(xi / xi.norm()); },
          [f](const Vec& xi) {
            double r = xi.norm();
            Vec n = xi / r;
            Vec g = fm_grad(f, n);
            return ((g - n.dot(g) * n) / r).eval();
          }};
}

// central finite-difference gradient wrapper for models lacking an exact one
inline FunctionModel fm_with_fd_gradient(int dim,
                                         const std::function<double(const Vec&)>& v,
                                         double step = 1e-6) {
  return {dim, false, v, [v, dim, step](const Vec& xi) {
            double h = step * (1.0 + xi.norm());
            Vec g(dim);
            for (int a = 0; a < dim; ++a) {
              Vec hi = xi, lo = xi;
              hi[a] += h;
              lo[a] -= h;
              g[a] = (v(hi) - v(lo)) / (2 * h);
            }
            return g;
          }};
}

// ---------------------------------------------------------------------------
// Brackets
// ---------------------------------------------------------------------------

inline double bracket_functions(const LieAlgebraData& alg, const FunctionModel& f,
                                const FunctionModel& g, const Vec& xi,
                                const ConformalFactor* deformation = nullptr) {
  if (f.dim != alg.dim || g.dim != alg.dim)
    throw DimensionMismatch("bracket operands vs algebra");
  double factor = deformation ? (*deformation)(xi) : 1.0;
  return factor * fm_grad(f, xi).dot(alg.poisson_matrix(xi) * fm_grad(g, xi));
}

// {f,g} as a reusable model; its gradient falls back to finite differences
inline FunctionModel bracket_model(const LieAlgebraData& alg, const FunctionModel& f,
                                   const FunctionModel& g,
                                   const ConformalFactor* deformation = nullptr,
                                   double fd_step = 1e-5) {
  auto v = [&alg, f, g, deformation](const Vec& xi) {
    return bracket_functions(alg, f, g, xi, deformation);
  };
  return fm_with_fd_gradient(alg.dim, v, fd_step);
}

// ---------------------------------------------------------------------------
// Jacobi verification (sphere structure, optionally deformed)
// ---------------------------------------------------------------------------

struct JacobiReport {
  int samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::array<int, 3> worst_triple{0, 0, 0};
  bool pass = false;
};

inline JacobiReport verify_jacobi(const LieAlgebraData& alg,
                                  const ConformalFactor* deformation, int samples,
                                  std::uint64_t seed) {
  JacobiReport rep;
  rep.samples = samples;
  std::vector<double> residuals(samples);
  std::vector<std::array<int, 3>> triples(samples);
  parallel_for(samples, [&](int s) {
    Rng rng = Rng::for_trial(seed, s);
    int i = static_cast<int>(rng.integer(alg.dim));
    int j = static_cast<int>(rng.integer(alg.dim));
    int k = static_cast<int>(rng.integer(alg.dim));
    Vec xi = rng.gaussian_vector(alg.dim).normalized();
    triples[s] = {i, j, k};
    FunctionModel x[3] = {fm_zero_homogeneous(fm_coordinate(alg.dim, i)),
                          fm_zero_homogeneous(fm_coordinate(alg.dim, j)),
                          fm_zero_homogeneous(fm_coordinate(alg.dim, k))};
    double jac = 0.0;
    for (int c = 0; c < 3; ++c) {
      FunctionModel inner =
          bracket_model(alg, x[c % 3], x[(c + 1) % 3], deformation);
      jac += bracket_functions(alg, inner, x[(c + 2) % 3], xi, deformation);
    }
    residuals[s] = std::abs(jac);
  });
  for (int s = 0; s < samples; ++s)
    if (residuals[s] > rep.max_residual) {
      rep.max_residual = residuals[s];
      rep.worst_triple = triples[s];
    }
  rep.tolerance = 1e-8 * 2.0;  // brackets are O(1) on the unit sphere
  rep.pass = rep.max_residual < rep.tolerance;
  return rep;
}

// ---------------------------------------------------------------------------
// Casimir verification
// ---------------------------------------------------------------------------

struct CasimirReport {
  int samples = 0;
  double max_residual = 0.0;
  Vec worst_point;
  bool pass = false;
};

inline CasimirReport verify_casimir(const LieAlgebraData& alg, const FunctionModel& f,
                                    int samples, std::uint64_t seed) {
  CasimirReport rep;
  rep.samples = samples;
  std::vector<double> residuals(samples);
  std::vector<Vec> points(samples);
  parallel_for(samples, [&](int s) {
    Rng rng = Rng::for_trial(seed, s);
    Vec xi = rng.gaussian_vector(alg.dim);
    xi *= rng.uniform(0.5, 1.5) / xi.norm();
    points[s] = xi;
    Vec row = alg.poisson_matrix(xi).transpose() * fm_grad(f, xi);
    residuals[s] = row.cwiseAbs().maxCoeff() / (1.0 + xi.norm());
  });
  for (int s = 0; s < samples; ++s)
    if (residuals[s] > rep.max_residual) {
      rep.max_residual = residuals[s];
      rep.worst_point = points[s];
    }
  rep.pass = rep.max_residual < 1e-9;
  return rep;
}

// ---------------------------------------------------------------------------
// The rescaling map (xi, t) -> xi / (t f(xi)) and its bracket identity
// ---------------------------------------------------------------------------

inline Vec phi_tilde_f(const FunctionModel& f, const Vec& xi, double t) {
  double fx = f.value(xi);
  if (t * fx <= 0.0)
    throw NonPositiveCasimir("t*f = " + std::to_string(t * fx));
  return xi / (t * fx);
}

struct LemmaBReport {
  int samples = 0;
  double max_residual = 0.0;
  bool pass = false;
};

// For random linear functions X, Y on the dual, random unit-sphere points xi
// and random t > 0, compare
//   lhs = {X,Y}_linear (phi(xi,t))     with
//   rhs = t f(xi) * {X.phi, Y.phi}_{sphere}(xi) ,
// where X.phi(xi,t) = <a, xi>/(t f(xi)) is differentiated tangentially.
// f must have a positive value and a gradient on the sphere.
inline LemmaBReport verify_lemma_b(const LieAlgebraData& alg, const FunctionModel& f,
                                   int samples, std::uint64_t seed) {
  LemmaBReport rep;
  rep.samples = samples;
  std::vector<double> residuals(samples);
  parallel_for(samples, [&](int s) {
    Rng rng = Rng::for_trial(seed, s);
    Vec a = rng.gaussian_vector(alg.dim);
    Vec b = rng.gaussian_vector(alg.dim);
    Vec xi = rng.gaussian_vector(alg.dim).normalized();
    double t = rng.uniform(0.5, 2.0);

    double fx = f.value(xi);
    if (fx <= 0.0) throw NonPositiveCasimir("f(xi) = " + std::to_string(fx));
    Vec gf = fm_grad(f, xi);
    gf -= xi.dot(gf) * xi;  // tangential part on the unit sphere

    // lhs: the linear-structure bracket of X, Y at the image point
    Vec image = xi / (t * fx);
    double lhs = a.dot(alg.poisson_matrix(image) * b);

    // rhs: deformed sphere bracket of the pulled-back functions
    auto pullback_grad = [&](const Vec& coeff) {
      Vec tang = coeff - xi.dot(coeff) * xi;
      return (tang / (t * fx) - coeff.dot(xi) * gf / (t * fx * fx)).eval();
    };
    const Mat pi = alg.poisson_matrix(xi);
    double rhs = t * fx * pullback_grad(a).dot(pi * pullback_grad(b));

    residuals[s] = std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
  });
  for (int s = 0; s < samples; ++s)
    rep.max_residual = std::max(rep.max_residual, residuals[s]);
  rep.pass = rep.max_residual < 1e-8;
  return rep;
}

// ---------------------------------------------------------------------------
// Hamiltonian flow (fixed-step 4th-order Runge-Kutta)
// ---------------------------------------------------------------------------

struct FlowState {
  double time = 0.0;
  Vec point;
  Vec diagnostics;  // |xi|^2, p_1..p_l, Hamiltonian
};

inline std::vector<FlowState> hamiltonian_flow(const Model& model,
                                               const FunctionModel& f, const Vec& xi0,
                                               double T, double dt,
                                               const ConformalFactor* deformation =
                                                   nullptr) {
  if (dt <= 0 || T < 0) throw StepSizeRejected("dt must be > 0 and T >= 0");
  const LieAlgebraData& alg = model.alg;
  auto field = [&](const Vec& xi) {
    double factor = deformation ? (*deformation)(xi) : 1.0;
    return (factor * alg.poisson_matrix(xi).transpose() * fm_grad(f, xi)).eval();
  };
  auto diagnostics = [&](const Vec& xi) {
    Vec p = eval_p(model.inv, alg, xi);
    Vec d(2 + model.inv.l);
    d[0] = xi.squaredNorm();
    d.segment(1, model.inv.l) = p;
    d[1 + model.inv.l] = f.value(xi);
    return d;
  };

  std::vector<FlowState> states;
  Vec xi = xi0;
  double t = 0.0;
  states.push_back({t, xi, diagnostics(xi)});
  const Vec initial = states.front().diagnostics;
  const int initial_leaf = is_regular(alg, xi0).leaf_dimension;
  int steps = static_cast<int>(std::ceil(T / dt - 1e-12));
  for (int s = 0; s < steps; ++s) {
    double h = std::min(dt, T - t);
    Vec k1 = field(xi);
    Vec k2 = field(xi + 0.5 * h * k1);
    Vec k3 = field(xi + 0.5 * h * k2);
    Vec k4 = field(xi + h * k3);
    xi += (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
    t += h;
    states.push_back({t, xi, diagnostics(xi)});
    if (s % 100 == 0 && is_regular(alg, xi).leaf_dimension > initial_leaf)
      throw StepSizeRejected("leaf rank increased along the flow");
  }
  for (const auto& st : states)
    for (int i = 0; i < initial.size(); ++i)
      if (std::abs(st.diagnostics[i] - initial[i]) > 1e-6 * (1 + std::abs(initial[i])))
        throw StepSizeRejected("conserved quantity drift at t = " +
                               std::to_string(st.time));
  return states;
}

// ---------------------------------------------------------------------------
// Coadjoint-orbit symplectic area for the rank-1 algebra
// ---------------------------------------------------------------------------

struct Su2PeriodReport {
  double radius = 0.0;
  int refinements = 0;
  double area = 0.0;      // quadrature of the leaf symplectic form
  double expected = 0.0;  // pairing of the orbit point with the minimal period
  double rel_error = 0.0;
  bool pass = false;
};

namespace detail {

inline Vec cross3(const Vec& a, const Vec& b) {
  Vec c(3);
  c << a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
      a[0] * b[1] - a[1] * b[0];
  return c;
}

struct SphereMesh {
  std::vector<Vec> vertices;               // on the unit sphere (R^3)
  std::vector<std::array<int, 3>> faces;   // outward-oriented
};

inline SphereMesh icosahedral_mesh(int refinements) {
  SphereMesh mesh;
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<std::array<double, 3>> raw;
  for (double s1 : {-1.0, 1.0})
    for (double s2 : {-1.0, 1.0}) {
      raw.push_back({0, s1, s2 * phi});
      raw.push_back({s1, s2 * phi, 0});
      raw.push_back({s2 * phi, 0, s1});
    }
  for (auto& v : raw) {
    Vec p(3);
    p << v[0], v[1], v[2];
    mesh.vertices.push_back(p.normalized());
  }
  // faces: triples at minimal pairwise distance
  const int n = static_cast<int>(mesh.vertices.size());
  double edge = 1e9;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      edge = std::min(edge, (mesh.vertices[i] - mesh.vertices[j]).norm());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        if ((mesh.vertices[i] - mesh.vertices[j]).norm() > edge + 1e-9) continue;
        if ((mesh.vertices[j] - mesh.vertices[k]).norm() > edge + 1e-9) continue;
        if ((mesh.vertices[i] - mesh.vertices[k]).norm() > edge + 1e-9) continue;
        std::array<int, 3> f{i, j, k};
        Vec centroid =
            (mesh.vertices[i] + mesh.vertices[j] + mesh.vertices[k]) / 3.0;
        Vec nrm = cross3(mesh.vertices[j] - mesh.vertices[i],
                         mesh.vertices[k] - mesh.vertices[i]);
        if (nrm.dot(centroid) < 0) std::swap(f[1], f[2]);
        mesh.faces.push_back(f);
      }
  // 4-way subdivision with reprojection
  for (int r = 0; r < refinements; ++r) {
    std::vector<std::array<int, 3>> next;
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      int idx = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back(
          ((mesh.vertices[a] + mesh.vertices[b]) / 2.0).normalized());
      midpoint[key] = idx;
      return idx;
    };
    for (const auto& f : mesh.faces) {
      int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    mesh.faces = std::move(next);
  }
  return mesh;
}

}  // namespace detail

inline Su2PeriodReport su2_period_check(double r, int refinements = 5) {
  if (refinements < 1) throw MeshTooCoarse("need at least one refinement");
  Su2PeriodReport rep;
  rep.radius = r;
  rep.refinements = refinements;
  const LieAlgebraData alg = build_algebra({Family::A, 1});

  // minimal positive multiple of the Cartan generator exponentiating to 1
  Vec e0 = Vec::Zero(3);
  e0[0] = 1.0;
  Eigen::SelfAdjointEigenSolver<CMat> es(Complex(0, -1) * alg.realize(e0));
  double mu = es.eigenvalues().cwiseAbs().maxCoeff();
  double tau = 2 * M_PI / mu;
  if ((exp_antihermitian(tau * alg.realize(e0)) -
       CMat::Identity(alg.matrix_size, alg.matrix_size))
          .cwiseAbs()
          .maxCoeff() > 1e-9)
    throw VerificationFailed("period candidate does not exponentiate to 1");
  rep.expected = std::abs(r * tau);  // <r e0, tau e0> under the invariant form

  // leaf symplectic form = inverse of the restricted bivector; integrate over
  // a geodesic triangulation with a degree-4 triangle rule and the smooth
  // parameterization xi(s,t) = r * normalize(affine(s,t))
  auto mesh = detail::icosahedral_mesh(refinements);
  const double ga = 0.445948490915965, gb = 0.091576213509771;
  const double wa = 0.223381589678011, wb = 0.109951743655322;
  const double gauss[6][3] = {{ga, ga, wa},           {ga, 1 - 2 * ga, wa},
                              {1 - 2 * ga, ga, wa},   {gb, gb, wb},
                              {gb, 1 - 2 * gb, wb},   {1 - 2 * gb, gb, wb}};
  double area = 0.0;
  for (const auto& f : mesh.faces) {
    const Vec &a = mesh.vertices[f[0]], &b = mesh.vertices[f[1]],
              &c = mesh.vertices[f[2]];
    double local = 0.0;
    for (const auto& g : gauss) {
      Vec p = a + g[0] * (b - a) + g[1] * (c - a);
      double pn = p.norm();
      Vec n = p / pn;
      Mat proj = Mat::Identity(3, 3) - n * n.transpose();
      Vec ds = r * proj * (b - a) / pn;
      Vec dt = r * proj * (c - a) / pn;
      Vec xi = r * n;
      Vec cross = detail::cross3(ds, dt);
      double signed_area = cross.dot(n);
      // orthonormal oriented tangent frame: u, v with u x v = n
      int best = 0;
      for (int k = 1; k < 3; ++k)
        if (proj.col(k).norm() > proj.col(best).norm()) best = k;
      Vec u = proj.col(best).normalized();
      Vec v = detail::cross3(n, u);
      double bivector = u.dot(alg.poisson_matrix(xi) * v);
      local += 0.5 * g[2] * signed_area / bivector;
    }
    area += local;
  }
  rep.area = std::abs(area);
  rep.rel_error = std::abs(rep.area - rep.expected) / rep.expected;
  rep.pass = rep.rel_error < 1e-4;
  return rep;
}

}  // namespace lps
