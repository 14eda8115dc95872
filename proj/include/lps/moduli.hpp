#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lps/poisson.hpp"

namespace lps {

// ---------------------------------------------------------------------------
// Casimir deformation models: a function h on the orbit-space slice (the
// image of the unit chamber sphere under the higher invariants), inducing the
// Casimir f = h(p') on the sphere, optionally exponentiated for positivity.
// ---------------------------------------------------------------------------

struct CasimirModel {
  enum class Kind { Polynomial, Grid };
  Kind kind = Kind::Polynomial;
  int vars = 0;  // l - 1

  Poly h;  // polynomial kind

  // grid kind: regular grid over [lo, hi] per axis, multilinear interpolation
  Vec grid_lo, grid_hi;
  std::vector<int> grid_res;  // nodes per axis, >= 2
  std::vector<double> grid_values;

  bool exp_flag = false;  // f = exp(h(p'))

  static CasimirModel polynomial(const Poly& h, bool exp_flag = false) {
    CasimirModel c;
    c.kind = Kind::Polynomial;
    c.vars = h.nvars();
    c.h = h;
    c.exp_flag = exp_flag;
    return c;
  }

  static CasimirModel grid(const Vec& lo, const Vec& hi, const std::vector<int>& res,
                           const std::vector<double>& values, bool exp_flag = false) {
    CasimirModel c;
    c.kind = Kind::Grid;
    c.vars = static_cast<int>(res.size());
    c.grid_lo = lo;
    c.grid_hi = hi;
    c.grid_res = res;
    c.grid_values = values;
    c.exp_flag = exp_flag;
    std::size_t expect = 1;
    for (int r : res) {
      if (r < 2) throw GridEmpty("grid needs >= 2 nodes per axis");
      expect *= r;
    }
    if (values.size() != expect) throw DimensionMismatch("grid value count");
    return c;
  }

  // h(x); for grids, multilinear interpolation with a small hull slack
  double eval_h(const Vec& x) const {
    if (static_cast<int>(x.size()) != vars) throw DimensionMismatch("h argument");
    if (kind == Kind::Polynomial) return h.eval(x);
    std::vector<int> cell(vars);
    std::vector<double> frac(vars);
    for (int a = 0; a < vars; ++a) {
      double span = grid_hi[a] - grid_lo[a];
      double slack = 1e-9 * (1.0 + std::abs(span));
      if (x[a] < grid_lo[a] - slack || x[a] > grid_hi[a] + slack)
        throw DomainMismatch("coordinate " + std::to_string(a) + " = " +
                             std::to_string(x[a]) + " outside the sampled hull");
      double u = std::clamp((x[a] - grid_lo[a]) / span, 0.0, 1.0) * (grid_res[a] - 1);
      cell[a] = std::min(static_cast<int>(u), grid_res[a] - 2);
      frac[a] = u - cell[a];
    }
    double total = 0.0;
    for (int corner = 0; corner < (1 << vars); ++corner) {
      double w = 1.0;
      std::size_t idx = 0;
      for (int a = 0; a < vars; ++a) {
        int bit = (corner >> a) & 1;
        w *= bit ? frac[a] : 1.0 - frac[a];
        idx = idx * grid_res[a] + (cell[a] + bit);
      }
      total += w * grid_values[idx];
    }
    return total;
  }

  double eval_f_of_hval(double hv) const { return exp_flag ? std::exp(hv) : hv; }
};

// f = [exp] h(p'(xi/|xi|)) as a function model; gradients exact for
// polynomial h, finite differences through h for grid models.
inline FunctionModel casimir_function(const Model& m, const CasimirModel& c) {
  if (c.vars != m.alg.rank - 1) throw DimensionMismatch("deformation arity vs rank");
  const Model* mp = &m;
  CasimirModel cm = c;
  auto value = [mp, cm](const Vec& xi) {
    return cm.eval_f_of_hval(cm.eval_h(eval_p_prime(mp->inv, mp->alg, xi / xi.norm())));
  };
  auto gradient = [mp, cm, value](const Vec& xi) {
    double r = xi.norm();
    Vec n = xi / r;
    auto [p, grads] = eval_p_with_grad(mp->inv, mp->alg, n);
    Vec x = p.tail(mp->inv.l - 1);
    Vec g = Vec::Zero(mp->alg.dim);
    for (int i = 0; i < mp->inv.l - 1; ++i) {
      double dh;
      if (cm.kind == CasimirModel::Kind::Polynomial) {
        dh = cm.h.derivative(i).eval(x);
      } else {
        Vec hi = x, lo = x;
        double step = 1e-6;
        hi[i] += step;
        lo[i] -= step;
        dh = (cm.eval_h(hi) - cm.eval_h(lo)) / (2 * step);
      }
      Vec gp = grads.row(i + 1).transpose();
      g += dh * (gp - n.dot(gp) * n) / r;  // zero-homogeneous chain rule
    }
    if (cm.exp_flag) g *= value(xi);
    return g;
  };
  return {m.alg.dim, c.kind == CasimirModel::Kind::Polynomial, value, gradient};
}

// conformal-factor handle for the poisson layer; F = 0 gives the undeformed
// sphere structure exactly
inline ConformalFactor deformation(const Model& m, const CasimirModel& c) {
  FunctionModel f = casimir_function(m, c);
  return f.value;
}

// ---------------------------------------------------------------------------
// Classification of Casimir pairs up to the outer group
// ---------------------------------------------------------------------------

struct EquivalenceReport {
  bool equivalent = false;
  int witness_index = -1;  // representative achieving the best residual
  Mat witness;
  double residual = 0.0;   // best over representatives
  double tolerance = 0.0;
};

inline EquivalenceReport classify_pair(const CasimirModel& f, const CasimirModel& g,
                                       const OuterGroupData& out,
                                       const std::vector<Vec>& grid) {
  if (grid.empty()) throw GridEmpty("classification grid");
  if (f.vars != g.vars) throw DimensionMismatch("operand arity");
  double sup_g = 0.0;
  for (const Vec& x : grid) sup_g = std::max(sup_g, std::abs(g.eval_h(x)));

  EquivalenceReport rep;
  rep.tolerance = 1e-6 * (1.0 + sup_g);
  rep.residual = std::numeric_limits<double>::infinity();
  const int reps = static_cast<int>(out.elements_on_invariants.size());
  std::vector<double> residuals(reps);
  parallel_for(reps, [&](int a) {
    const Mat& ma = out.elements_on_invariants[a];
    double worst = 0.0;
    for (const Vec& x : grid)
      worst = std::max(worst, std::abs(f.eval_h(x) - g.eval_h(ma * x)));
    residuals[a] = worst;
  });
  for (int a = 0; a < reps; ++a)
    if (residuals[a] < rep.residual) {
      rep.residual = residuals[a];
      rep.witness_index = a;
      rep.witness = out.elements_on_invariants[a];
    }
  rep.equivalent = rep.residual < rep.tolerance;
  return rep;
}

// canonical orbit coordinate: lexicographically smallest value vector over
// the finite group orbit {h o M_a}
inline std::vector<double> canonical_values(const CasimirModel& f,
                                            const OuterGroupData& out,
                                            const std::vector<Vec>& grid) {
  if (grid.empty()) throw GridEmpty("canonicalization grid");
  std::vector<double> best;
  for (const Mat& ma : out.elements_on_invariants) {
    std::vector<double> vals;
    vals.reserve(grid.size());
    for (const Vec& x : grid) vals.push_back(f.eval_h(ma * x));
    if (best.empty() || std::lexicographical_compare(vals.begin(), vals.end(),
                                                     best.begin(), best.end()))
      best = vals;
  }
  return best;
}

// ---------------------------------------------------------------------------
// The rank-2 special-unitary reference model
// ---------------------------------------------------------------------------

struct Su3Reference {
  double chamber_lo = -M_PI / 6;
  double chamber_hi = M_PI / 6;
  double slice_lo = -1.0;  // image of the unit chamber sphere
  double slice_hi = 1.0;

  // unit-speed chamber-sphere parameterization, in Cartan coordinates
  Vec a_theta(double theta) const {
    Vec t(2);
    t << std::cos(theta), std::sin(theta);
    return t;
  }
  // the involution induced on functions of the slice coordinate
  double involution(const std::function<double(double)>& h, double x) const {
    return h(-x);
  }
};

inline Su3Reference su3_reference() { return {}; }

struct Su3Clause {
  std::string name;
  bool pass = false;
  double residual = 0.0;
};

struct Su3Report {
  std::vector<Su3Clause> clauses;
  bool pass = false;
};

inline Su3Report verify_su3(const Model& m, bool throw_on_fail = true) {
  if (m.alg.family != Family::A || m.alg.rank != 2)
    throw DomainMismatch("reference model needs the rank-2 special unitary algebra");
  Su3Reference ref;
  Su3Report rep;
  auto clause = [&](const std::string& name, double residual, double tol) {
    rep.clauses.push_back({name, residual < tol, residual});
  };

  // (i) unit-norm, unit-speed chamber parameterization
  {
    double worst = 0.0;
    for (double theta = ref.chamber_lo; theta <= ref.chamber_hi; theta += 0.01) {
      Vec a = m.cartan.embed(ref.a_theta(theta));
      worst = std::max(worst, std::abs(a.norm() - 1.0));
      double h = 1e-6;
      Vec da = (m.cartan.embed(ref.a_theta(theta + h)) -
                m.cartan.embed(ref.a_theta(theta - h))) /
               (2 * h);
      worst = std::max(worst, std::abs(da.norm() - 1.0));
    }
    clause("isometric parameterization", worst, 1e-6);
  }

  // (ii) invariant formulas on an (r, theta) grid
  {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i)
      for (int j = 0; j < 100; ++j) {
        double r = 0.02 + 2.0 * i / 99;
        double theta = -M_PI + 2 * M_PI * j / 99;
        Vec p = eval_p(m.inv, m.alg, m.cartan.embed(r * ref.a_theta(theta)));
        worst = std::max(worst, std::abs(p[0] - r * r));
        worst = std::max(worst, std::abs(p[1] - r * r * r * std::sin(3 * theta)));
      }
    clause("invariant closed forms", worst, 1e-9);
  }

  // (iii) full orbit-space image lies in the cusp region
  {
    Rng rng(0x533c);
    double worst = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < 10000; ++t) {
      Vec p = eval_p(m.inv, m.alg, rng.gaussian_vector(8));
      worst = std::max(worst, p[1] * p[1] - p[0] * p[0] * p[0]);
    }
    clause("cusp-region membership", worst, 1e-9);
  }

  // (iv) slice endpoints
  {
    auto cloud = delta_sample(m, {400, 0, 1}, true);
    double lo = 1e9, hi = -1e9;
    for (const Vec& p : cloud.points) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    clause("slice endpoints", std::max(std::abs(lo + 1), std::abs(hi - 1)), 1e-6);
  }

  // (v) the Weyl group permutes the diagonal spectrum values
  {
    Mat forms(3, 2);  // linear forms: diagonal entries over the Cartan coords
    for (int j = 0; j < 3; ++j)
      for (int a = 0; a < 2; ++a) forms(j, a) = m.alg.basis[a](j, j).imag();
    double worst = 1e9;
    bool all = true;
    for (const Mat& w : m.weyl.elements) {
      Mat moved = forms * w;
      std::array<int, 3> perm{0, 1, 2};
      bool found = false;
      do {
        Mat p = Mat::Zero(3, 3);
        for (int j = 0; j < 3; ++j) p(j, perm[j]) = 1.0;
        if (approx_equal(moved, p * forms, 1e-9)) found = true;
      } while (std::next_permutation(perm.begin(), perm.end()) && !found);
      all = all && found;
    }
    rep.clauses.push_back({"Weyl permutation action", all, all ? 0.0 : 1.0});
    (void)worst;
  }

  // (vi) the conjugation involution: -1 on the Cartan, sign flip on the slice
  {
    const Mat* nontrivial = nullptr;
    for (std::size_t a = 0; a < m.out.elements_on_invariants.size(); ++a)
      if (std::abs(m.out.elements_on_invariants[a](0, 0) + 1.0) < 1e-9)
        nontrivial = &m.out.elements_on_t[a];
    double resid = 1.0;
    if (nontrivial) {
      // composed with a Weyl element, the representative acts as -1 on t
      for (const Mat& w : m.weyl.elements)
        resid = std::min(resid,
                         (w * (*nontrivial) + Mat::Identity(2, 2)).cwiseAbs().maxCoeff());
    }
    clause("conjugation involution", resid, 1e-9);
  }

  rep.pass = true;
  for (const auto& c : rep.clauses) rep.pass = rep.pass && c.pass;
  if (!rep.pass && throw_on_fail) {
    std::string failed;
    for (const auto& c : rep.clauses)
      if (!c.pass) failed += (failed.empty() ? "" : ", ") + c.name;
    throw ReferenceMismatch("failed clauses: " + failed);
  }
  return rep;
}

}  // namespace lps
