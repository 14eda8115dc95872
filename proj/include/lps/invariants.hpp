#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "lps/cartan.hpp"
#include "lps/poly.hpp"

namespace lps {

// ---------------------------------------------------------------------------
// Invariant generators p_1..p_l. Raw material: traces of powers of the
// Hermitian realization H = -i M(xi) (plus the Pfaffian for family D). Each
// generator beyond p_1 = |xi|^2 is corrected by its L2(sphere) projection
// onto products of lower-degree generators; this makes the linear span of
// p_2..p_l invariant under the outer automorphisms (the correction space is
// Out-stable and the sphere metric is Out-invariant). Scales are fixed so
// that max |q_i| over the unit chamber sphere is 1.
// ---------------------------------------------------------------------------

struct InvariantSet {
  Family family = Family::A;
  int l = 0;    // number of generators
  int dim = 0;  // ambient coordinate count

  struct Generator {
    bool pfaffian = false;
    int power = 0;  // trace power, when not the Pfaffian
    int degree = 0;
    double scale = 1.0;
    // subtracted products of earlier (final) generators: coeff, multi-index
    std::vector<std::pair<double, std::vector<int>>> corrections;
  };
  std::vector<Generator> gens;
  std::vector<int> degrees;

  std::vector<Poly> q_polys;  // final generators restricted to t* (rank vars)

  // family D only: raw Pfaffian as a polynomial in the dim coordinates
  Poly pfaffian_poly;
  std::vector<Poly> pfaffian_grad;
};

namespace detail {

template <typename T>
T pfaffian_generic(const std::vector<std::vector<T>>& m, const T& zero) {
  const int n = static_cast<int>(m.size());
  if (n % 2 != 0) return zero;
  if (n == 0) {
    throw Error("pfaffian_generic: empty base handled by caller");
  }
  if (n == 2) return m[0][1];
  T total = zero;
  for (int j = 1; j < n; ++j) {
    std::vector<std::vector<T>> sub;
    for (int r = 1; r < n; ++r) {
      if (r == j) continue;
      std::vector<T> row;
      for (int c = 1; c < n; ++c) {
        if (c == j) continue;
        row.push_back(m[r][c]);
      }
      sub.push_back(row);
    }
    T term = m[0][j] * pfaffian_generic(sub, zero);
    if (j % 2 == 1)
      total = total + term;
    else
      total = total - term;
  }
  return total;
}

// all multi-indices m over generators of degree < target with
// sum m_i * deg_i == target
inline void enumerate_products(const std::vector<int>& degrees, int target, int from,
                               std::vector<int>& current,
                               std::vector<std::vector<int>>& out) {
  if (target == 0) {
    for (int v : current)
      if (v > 0) {
        out.push_back(current);
        return;
      }
    return;
  }
  if (from >= static_cast<int>(degrees.size())) return;
  int maxcount = target / degrees[from];
  for (int c = maxcount; c >= 0; --c) {
    current[from] = c;
    enumerate_products(degrees, target - c * degrees[from], from + 1, current, out);
  }
  current[from] = 0;
}

// simplex grid: all compositions c of `resolution` into `parts` nonnegative
// integers, emitted as barycentric coordinates c / resolution
inline void simplex_grid(int parts, int resolution,
                         const std::function<void(const Vec&)>& visit) {
  std::vector<int> c(parts, 0);
  std::function<void(int, int)> rec = [&](int idx, int left) {
    if (idx == parts - 1) {
      c[idx] = left;
      Vec t(parts);
      for (int i = 0; i < parts; ++i) t[i] = static_cast<double>(c[i]) / resolution;
      visit(t);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      c[idx] = v;
      rec(idx + 1, left - v);
    }
  };
  rec(0, resolution);
}

}  // namespace detail

// Everything needed to work with one algebra; built once and shared.
struct Model {
  LieAlgebraData alg;
  CartanData cartan;
  RootSystemData rs;
  WeylGroupData weyl;
  InvariantSet inv;
  OuterGroupData out;
};

// ---------------------------------------------------------------------------
// Raw evaluation helpers
// ---------------------------------------------------------------------------

namespace detail {

struct RawEval {
  std::vector<double> values;  // per generator
  std::vector<Vec> grads;      // per generator (empty when not requested)
};

inline RawEval eval_raw(const InvariantSet& inv, const LieAlgebraData& alg, const Vec& xi,
                        bool with_grad) {
  RawEval r;
  const CMat m = alg.realize(xi);
  const CMat h = Complex(0, -1) * m;
  int max_power = 0;
  for (const auto& g : inv.gens)
    if (!g.pfaffian) max_power = std::max(max_power, g.power);
  std::vector<CMat> powers(max_power + 1);  // powers[k] = H^k
  powers[0] = CMat::Identity(alg.matrix_size, alg.matrix_size);
  for (int k = 1; k <= max_power; ++k) powers[k] = powers[k - 1] * h;

  for (const auto& g : inv.gens) {
    if (g.pfaffian) {
      r.values.push_back(pfaffian_real(m.real()));
      if (with_grad) {
        Vec grad(alg.dim);
        for (int i = 0; i < alg.dim; ++i) grad[i] = inv.pfaffian_grad[i].eval(xi);
        r.grads.push_back(grad);
      }
    } else {
      r.values.push_back(powers[g.power].trace().real());
      if (with_grad) {
        Vec grad(alg.dim);
        const CMat& hk = powers[g.power - 1];
        for (int i = 0; i < alg.dim; ++i)
          grad[i] = g.power * (Complex(0, -1) * (hk * alg.basis[i]).trace()).real();
        r.grads.push_back(grad);
      }
    }
  }
  return r;
}

}  // namespace detail

// Values of all generators at xi (final, i.e. corrected and scaled).
inline Vec eval_p(const InvariantSet& inv, const LieAlgebraData& alg, const Vec& xi) {
  auto raw = detail::eval_raw(inv, alg, xi, false);
  Vec p(inv.l);
  for (int i = 0; i < inv.l; ++i) {
    double v = raw.values[i];
    for (const auto& [c, multi] : inv.gens[i].corrections) {
      double prod = c;
      for (int j = 0; j < i; ++j)
        for (int e = 0; e < multi[j]; ++e) prod *= p[j];
      v -= prod;
    }
    p[i] = inv.gens[i].scale * v;
  }
  return p;
}

inline Vec eval_p_prime(const InvariantSet& inv, const LieAlgebraData& alg, const Vec& xi) {
  return eval_p(inv, alg, xi).tail(inv.l - 1);
}

// Values and exact gradients (rows of `grads`) of all generators at xi.
inline std::pair<Vec, Mat> eval_p_with_grad(const InvariantSet& inv,
                                            const LieAlgebraData& alg, const Vec& xi) {
  auto raw = detail::eval_raw(inv, alg, xi, true);
  Vec p(inv.l);
  Mat grads(inv.l, alg.dim);
  for (int i = 0; i < inv.l; ++i) {
    double v = raw.values[i];
    Vec g = raw.grads[i];
    for (const auto& [c, multi] : inv.gens[i].corrections) {
      double prod = c;
      for (int j = 0; j < i; ++j)
        for (int e = 0; e < multi[j]; ++e) prod *= p[j];
      v -= prod;
      for (int j = 0; j < i; ++j) {
        if (multi[j] == 0) continue;
        double partial = c * multi[j];
        for (int j2 = 0; j2 < i; ++j2) {
          int e = multi[j2] - (j2 == j ? 1 : 0);
          for (int k = 0; k < e; ++k) partial *= p[j2];
        }
        g -= partial * grads.row(j).transpose();
      }
    }
    p[i] = inv.gens[i].scale * v;
    grads.row(i) = inv.gens[i].scale * g.transpose();
  }
  return {p, grads};
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

inline InvariantSet invariant_generators(const LieAlgebraData& alg, const CartanData& cartan,
                                         const RootSystemData& rs) {
  const int l = alg.rank;
  InvariantSet inv;
  inv.family = alg.family;
  inv.l = l;
  inv.dim = alg.dim;

  // raw generator list, ascending degree (Pfaffian after the trace of the
  // same degree)
  struct RawGen {
    bool pfaffian;
    int power;
    int degree;
  };
  std::vector<RawGen> raws;
  switch (alg.family) {
    case Family::A:
      for (int k = 2; k <= l + 1; ++k) raws.push_back({false, k, k});
      break;
    case Family::B:
    case Family::C:
      for (int k = 1; k <= l; ++k) raws.push_back({false, 2 * k, 2 * k});
      break;
    case Family::D:
      for (int k = 1; k < l; ++k) raws.push_back({false, 2 * k, 2 * k});
      raws.push_back({true, 0, l});
      std::sort(raws.begin(), raws.end(), [](const RawGen& a, const RawGen& b) {
        if (a.degree != b.degree) return a.degree < b.degree;
        return a.pfaffian < b.pfaffian;
      });
      break;
  }

  // family D: Pfaffian as a polynomial in the ambient coordinates (for exact
  // gradients)
  if (alg.family == Family::D) {
    const int n = alg.matrix_size;
    std::vector<std::vector<Poly>> pm(n, std::vector<Poly>(n, Poly(alg.dim)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Vec coeffs = Vec::Zero(alg.dim);
        for (int b = 0; b < alg.dim; ++b) coeffs[b] = alg.basis[b](i, j).real();
        pm[i][j] = Poly::linear_form(coeffs);
      }
    inv.pfaffian_poly = detail::pfaffian_generic(pm, Poly(alg.dim));
    for (int i = 0; i < alg.dim; ++i)
      inv.pfaffian_grad.push_back(inv.pfaffian_poly.derivative(i));
  }

  // raw generators restricted to t*, as exact polynomials in the rank
  // coordinates (the canonical-form spectrum is linear in them)
  auto raw_q = [&](const RawGen& g) -> Poly {
    if (alg.family == Family::A) {
      const int n = alg.matrix_size;
      Poly q(l);
      for (int j = 0; j < n; ++j) {
        Vec lin(l);
        for (int a = 0; a < l; ++a) lin[a] = alg.basis[a](j, j).imag();
        q += Poly::linear_form(lin).pow(g.power);
      }
      return q;
    }
    if (g.pfaffian) {
      Poly q = Poly::constant(l, 1.0);
      for (int a = 0; a < l; ++a)
        q = q * ((1.0 / std::sqrt(2.0)) * Poly::variable(l, a));
      return q;
    }
    // B/C/D trace powers: eigenvalues +-h_a/sqrt(2) (plus 0 for family B)
    Poly q(l);
    for (int a = 0; a < l; ++a)
      q += 2.0 * ((1.0 / std::sqrt(2.0)) * Poly::variable(l, a)).pow(g.power);
    return q;
  };

  // chamber-sphere sample points, used to normalize the scales
  std::vector<Vec> chamber_dirs;
  {
    auto weights = fundamental_weights(rs);
    int res = l <= 2 ? 720 : (l == 3 ? 90 : 36);
    detail::simplex_grid(l, res, [&](const Vec& t) {
      Vec x = Vec::Zero(l);
      for (int i = 0; i < l; ++i) x += t[i] * weights[i];
      double norm = x.norm();
      if (norm > 1e-12) chamber_dirs.push_back(x / norm);
    });
  }

  for (std::size_t gi = 0; gi < raws.size(); ++gi) {
    const RawGen& rg = raws[gi];
    InvariantSet::Generator gen;
    gen.pfaffian = rg.pfaffian;
    gen.power = rg.power;
    gen.degree = rg.degree;

    Poly q = raw_q(rg);

    if (gi > 0) {
      // project away products of lower-degree final generators
      std::vector<std::vector<int>> products;
      std::vector<int> lower_deg;
      for (std::size_t j = 0; j < gi; ++j)
        lower_deg.push_back(inv.gens[j].degree < rg.degree ? inv.gens[j].degree
                                                           : rg.degree + 1);
      std::vector<int> current(gi, 0);
      detail::enumerate_products(lower_deg, rg.degree, 0, current, products);
      if (!products.empty()) {
        std::vector<Poly> basis;
        for (const auto& multi : products) {
          Poly b = Poly::constant(l, 1.0);
          for (std::size_t j = 0; j < gi; ++j)
            if (multi[j] > 0) b = b * inv.q_polys[j].pow(multi[j]);
          basis.push_back(b);
        }
        const int nb = static_cast<int>(basis.size());
        Mat gram(nb, nb);
        Vec rhs(nb);
        for (int a = 0; a < nb; ++a) {
          rhs[a] = q.sphere_dot(basis[a]);
          for (int b = 0; b <= a; ++b)
            gram(a, b) = gram(b, a) = basis[a].sphere_dot(basis[b]);
        }
        Vec coeff = gram.fullPivLu().solve(rhs);
        for (int a = 0; a < nb; ++a) {
          std::vector<int> multi(products[a]);
          multi.resize(gi, 0);
          gen.corrections.emplace_back(coeff[a], multi);
          q -= coeff[a] * basis[a];
        }
      }
      // scale: max |q| over the unit chamber sphere equals 1
      double m = 0.0;
      for (const Vec& x : chamber_dirs) m = std::max(m, std::abs(q.eval(x)));
      gen.scale = 1.0 / m;
      q = gen.scale * q;
    } else {
      gen.scale = 1.0;  // p_1 = |xi|^2 exactly
    }

    inv.gens.push_back(gen);
    inv.degrees.push_back(rg.degree);
    inv.q_polys.push_back(q);
  }

  // algebraic independence: full-rank Jacobian at a random regular point
  {
    Rng rng(0x1a0b);
    Vec xi = rng.gaussian_vector(alg.dim).normalized();
    auto [p, grads] = eval_p_with_grad(inv, alg, xi);
    Eigen::JacobiSVD<Mat> svd(grads);
    if (svd.singularValues()[l - 1] < 1e-8)
      throw IndependenceCheckFailed("Jacobian rank deficient at sample point");
  }
  return inv;
}

// ---------------------------------------------------------------------------
// Outer group action on the p'-coordinates (least squares over samples).
// ---------------------------------------------------------------------------

inline OuterGroupData outer_group(const LieAlgebraData& alg, const CartanData& cartan,
                                  const RootSystemData& rs, const InvariantSet& inv) {
  OuterGroupData out = outer_on_t(rs);
  const int l = alg.rank;
  const int m = l - 1;
  if (m == 0) {
    for (std::size_t i = 0; i < out.elements_on_t.size(); ++i)
      out.elements_on_invariants.push_back(Mat::Zero(0, 0));
    return out;
  }
  const int samples = 8 * m + 16;
  Rng rng(0x07e5);
  Mat x(m, samples);
  std::vector<Vec> points;
  for (int s = 0; s < samples; ++s) {
    Vec t = rng.gaussian_vector(l) * rng.uniform(0.5, 1.5);
    points.push_back(t);
    x.col(s) = eval_p_prime(inv, alg, cartan.embed(t));
  }
  Mat xxt = x * x.transpose();
  for (const Mat& f : out.elements_on_t) {
    Mat y(m, samples);
    for (int s = 0; s < samples; ++s)
      y.col(s) = eval_p_prime(inv, alg, cartan.embed(f * points[s]));
    Mat ma = (xxt.fullPivLu().solve(x * y.transpose())).transpose();
    double resid = (y - ma * x).cwiseAbs().maxCoeff();
    double scale = 1.0 + y.cwiseAbs().maxCoeff();
    if (resid > 1e-9 * scale)
      throw NonlinearInducedAction("induced action residual " + std::to_string(resid));
    out.elements_on_invariants.push_back(ma);
  }
  return out;
}

inline Model build_model(const LieAlgebraSpec& spec) {
  Model m;
  m.alg = build_algebra(spec);
  std::tie(m.cartan, m.rs) = compute_roots(m.alg);
  m.weyl = weyl_group(m.rs);
  m.inv = invariant_generators(m.alg, m.cartan, m.rs);
  m.out = outer_group(m.alg, m.cartan, m.rs, m.inv);
  return m;
}

// ---------------------------------------------------------------------------
// Delta / Delta' sampling
// ---------------------------------------------------------------------------

struct ChamberGridSpec {
  int resolution = 50;     // per axis
  double r_min = 0.0;      // radial range for full-chamber grids
  double r_max = 1.5;
};

struct DeltaCloud {
  bool sphere = false;              // Delta' (unit sphere) vs Delta (full cone)
  std::vector<Vec> parameters;      // chamber coordinates of the source points
  std::vector<Vec> points;          // images under q (or q')
};

// Images of a chamber grid under q (sphere=false: full chamber, values in R^l)
// or of the unit chamber sphere under q' (sphere=true, values in R^{l-1}).
inline DeltaCloud delta_sample(const Model& model, const ChamberGridSpec& grid,
                               bool sphere) {
  if (grid.resolution < 2) throw GridEmpty("grid resolution must be >= 2");
  const int l = model.alg.rank;
  auto weights = fundamental_weights(model.rs);
  DeltaCloud cloud;
  cloud.sphere = sphere;

  std::vector<Vec> dirs;
  detail::simplex_grid(l, grid.resolution, [&](const Vec& t) {
    Vec x = Vec::Zero(l);
    for (int i = 0; i < l; ++i) x += t[i] * weights[i];
    double n = x.norm();
    if (n > 1e-12) dirs.push_back(x / n);
  });

  if (sphere) {
    for (const Vec& d : dirs) {
      cloud.parameters.push_back(d);
      cloud.points.push_back(eval_p_prime(model.inv, model.alg, model.cartan.embed(d)));
    }
  } else {
    for (int ri = 0; ri <= grid.resolution; ++ri) {
      double r = grid.r_min + (grid.r_max - grid.r_min) * ri / grid.resolution;
      for (const Vec& d : dirs) {
        Vec xi_t = r * d;
        cloud.parameters.push_back(xi_t);
        cloud.points.push_back(eval_p(model.inv, model.alg, model.cartan.embed(xi_t)));
      }
    }
  }
  return cloud;
}

// ---------------------------------------------------------------------------
// Verifications
// ---------------------------------------------------------------------------

struct ChevalleyReport {
  int trials = 0;
  double max_orbit_residual = 0.0;  // p(xi) vs q(to_chamber(xi))
  double max_weyl_residual = 0.0;   // q(w xi_t) vs q(xi_t)
  bool pass = false;
};

inline ChevalleyReport verify_chevalley(const Model& model, int trials,
                                        std::uint64_t seed) {
  if (trials < 1) throw VerificationFailed("trials must be >= 1");
  ChevalleyReport rep;
  rep.trials = trials;
  std::vector<double> orbit(trials), weyl(trials);
  parallel_for(trials, [&](int t) {
    Rng rng = Rng::for_trial(seed, t);
    Vec xi = rng.gaussian_vector(model.alg.dim);
    auto chart = to_chamber(model.alg, model.cartan, model.rs, xi);
    Vec p = eval_p(model.inv, model.alg, xi);
    Vec q = eval_p(model.inv, model.alg, model.cartan.embed(chart.dominant_t));
    double r1 = 0.0;
    for (int i = 0; i < model.inv.l; ++i)
      r1 = std::max(r1, std::abs(p[i] - q[i]) / (1.0 + std::abs(q[i])));
    orbit[t] = r1;

    Vec xi_t = rng.gaussian_vector(model.alg.rank);
    const Mat& w = model.weyl.elements[rng.integer(model.weyl.order())];
    Vec qa = eval_p(model.inv, model.alg, model.cartan.embed(xi_t));
    Vec qb = eval_p(model.inv, model.alg, model.cartan.embed(w * xi_t));
    weyl[t] = (qa - qb).cwiseAbs().maxCoeff();
  });
  for (int t = 0; t < trials; ++t) {
    rep.max_orbit_residual = std::max(rep.max_orbit_residual, orbit[t]);
    rep.max_weyl_residual = std::max(rep.max_weyl_residual, weyl[t]);
  }
  rep.pass = rep.max_orbit_residual < 1e-8 && rep.max_weyl_residual < 1e-10;
  return rep;
}

struct Lemma2Report {
  bool injective = false;
  double min_interior_jacobian = 0.0;  // min |det| over interior grid
  double max_wall_jacobian = 0.0;      // max |det| over wall samples
  bool pass = false;
};

// Numerical surrogate for the chamber-to-Delta homeomorphism: q is injective
// on a chamber grid, an immersion in the interior, degenerate on the walls.
inline Lemma2Report verify_lemma2(const Model& model, int resolution = 50) {
  const int l = model.alg.rank;
  auto weights = fundamental_weights(model.rs);
  Lemma2Report rep;

  auto q_at = [&](const Vec& xi_t) {
    return eval_p(model.inv, model.alg, model.cartan.embed(xi_t));
  };
  auto jac_det = [&](const Vec& xi_t) {
    // central finite differences, independent of the exact-gradient path
    const double h = 1e-5 * (1.0 + xi_t.norm());
    Mat j(l, l);
    for (int a = 0; a < l; ++a) {
      Vec hi = xi_t, lo = xi_t;
      hi[a] += h;
      lo[a] -= h;
      j.col(a) = (q_at(hi) - q_at(lo)) / (2.0 * h);
    }
    return std::abs(j.determinant());
  };

  // interior grid: strictly positive simplex coordinates, radius band
  std::vector<Vec> interior_params, interior_points;
  const int n_side = std::max(2, resolution / (l > 1 ? 8 : 1));
  std::vector<Vec> dirs;
  detail::simplex_grid(l, n_side + 1, [&](const Vec& t) {
    for (int i = 0; i < l; ++i)
      if (t[i] < 0.5 / (n_side + 1)) return;  // walls excluded
    Vec x = Vec::Zero(l);
    for (int i = 0; i < l; ++i) x += t[i] * weights[i];
    dirs.push_back(x);
  });
  int n_r = std::max(2, resolution / std::max<int>(1, static_cast<int>(dirs.size()) / 8));
  for (int ri = 0; ri < n_r; ++ri) {
    double r = 0.4 + 1.2 * ri / (n_r - 1);
    for (const Vec& d : dirs) {
      Vec xi_t = r * d / d.norm();
      interior_params.push_back(xi_t);
      interior_points.push_back(q_at(xi_t));
    }
  }

  rep.injective = true;
  for (std::size_t i = 0; i < interior_points.size() && rep.injective; ++i)
    for (std::size_t j = i + 1; j < interior_points.size(); ++j) {
      if ((interior_params[i] - interior_params[j]).norm() < 1e-6) continue;
      if ((interior_points[i] - interior_points[j]).cwiseAbs().maxCoeff() < 1e-9) {
        rep.injective = false;
        break;
      }
    }

  rep.min_interior_jacobian = std::numeric_limits<double>::infinity();
  for (const Vec& xi_t : interior_params)
    rep.min_interior_jacobian = std::min(rep.min_interior_jacobian, jac_det(xi_t));

  // wall samples: one simplex coordinate zero (rank 1 has no walls off 0)
  rep.max_wall_jacobian = 0.0;
  if (l > 1) {
    for (int wall = 0; wall < l; ++wall) {
      detail::simplex_grid(l, 6, [&](const Vec& t) {
        if (t[wall] > 1e-12) return;
        Vec x = Vec::Zero(l);
        for (int i = 0; i < l; ++i) x += t[i] * weights[i];
        if (x.norm() < 1e-9) return;
        rep.max_wall_jacobian = std::max(rep.max_wall_jacobian, jac_det(x / x.norm()));
      });
    }
  }

  rep.pass = rep.injective && rep.min_interior_jacobian > 1e-12 &&
             (l == 1 || rep.max_wall_jacobian < 1e-6);
  return rep;
}

}  // namespace lps
