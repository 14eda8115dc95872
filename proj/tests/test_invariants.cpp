#include <catch2/catch_amalgamated.hpp>

#include "lps/invariants.hpp"

using namespace lps;

namespace {

Model make(Family f, int rank) { return build_model({f, rank}); }

Model& su3() {
  static Model m = make(Family::A, 2);
  return m;
}

Vec theta_point(const Model& m, double r, double theta) {
  Vec t(2);
  t << r * std::cos(theta), r * std::sin(theta);
  return m.cartan.embed(t);
}

}  // namespace

TEST_CASE("su(3): closed forms q1 = r^2, q2 = r^3 sin(3 theta)") {
  auto& m = su3();
  for (double r : {0.5, 1.0, 1.7}) {
    for (double theta = -M_PI; theta <= M_PI; theta += 0.1) {
      Vec p = eval_p(m.inv, m.alg, theta_point(m, r, theta));
      CHECK(std::abs(p[0] - r * r) < 1e-10);
      CHECK(std::abs(p[1] - r * r * r * std::sin(3 * theta)) < 1e-10);
    }
  }
  // the scale is sqrt(6) times the plain cubic power sum
  Vec xi = theta_point(su3(), 1.3, 0.4);
  CMat h = Complex(0, -1) * su3().alg.realize(xi);
  double plain = (h * h * h).trace().real();
  Vec p = eval_p(su3().inv, su3().alg, xi);
  CHECK(std::abs(p[1] - std::sqrt(6.0) * plain) < 1e-10);
}

TEST_CASE("p1 is the squared norm for every family") {
  for (auto [f, r] : {std::pair{Family::A, 1}, {Family::A, 2}, {Family::B, 2},
                      {Family::C, 2}, {Family::D, 3}}) {
    auto m = make(f, r);
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
      Vec xi = rng.gaussian_vector(m.alg.dim);
      CHECK(std::abs(eval_p(m.inv, m.alg, xi)[0] - xi.squaredNorm()) <
            1e-12 * (1 + xi.squaredNorm()));
    }
  }
}

TEST_CASE("homogeneity of each generator") {
  for (auto [f, r] : {std::pair{Family::A, 3}, {Family::B, 2}, {Family::D, 4}}) {
    auto m = make(f, r);
    Rng rng(6);
    for (int trial = 0; trial < 5; ++trial) {
      Vec xi = rng.gaussian_vector(m.alg.dim);
      double s = rng.uniform(0.3, 2.0);
      Vec p1 = eval_p(m.inv, m.alg, xi);
      Vec p2 = eval_p(m.inv, m.alg, s * xi);
      for (int i = 0; i < m.inv.l; ++i)
        CHECK(rel_residual(p2[i], std::pow(s, m.inv.degrees[i]) * p1[i]) < 1e-9);
    }
  }
}

TEST_CASE("conjugation invariance of each generator") {
  for (auto [f, r] : {std::pair{Family::A, 2}, {Family::C, 2}, {Family::D, 3}}) {
    auto m = make(f, r);
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
      Vec xi = rng.gaussian_vector(m.alg.dim);
      GroupWord word{{rng.gaussian_vector(m.alg.dim), rng.uniform(-1, 1)},
                     {rng.gaussian_vector(m.alg.dim), rng.uniform(-1, 1)}};
      Vec a = eval_p(m.inv, m.alg, xi);
      Vec b = eval_p(m.inv, m.alg, coadjoint_apply(m.alg, word, xi));
      CHECK((a - b).cwiseAbs().maxCoeff() < 1e-8 * (1 + a.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("restriction polynomials agree with the matrix evaluation path") {
  for (auto [f, r] : {std::pair{Family::A, 2}, {Family::B, 2}, {Family::D, 4}}) {
    auto m = make(f, r);
    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
      Vec t = rng.gaussian_vector(m.alg.rank);
      Vec p = eval_p(m.inv, m.alg, m.cartan.embed(t));
      for (int i = 0; i < m.inv.l; ++i)
        CHECK(rel_residual(p[i], m.inv.q_polys[i].eval(t)) < 1e-10);
    }
  }
}

TEST_CASE("exact gradients match central finite differences") {
  for (auto [f, r] : {std::pair{Family::A, 2}, {Family::B, 2}, {Family::D, 3}}) {
    auto m = make(f, r);
    Rng rng(9);
    Vec xi = rng.gaussian_vector(m.alg.dim);
    auto [p, grads] = eval_p_with_grad(m.inv, m.alg, xi);
    const double h = 1e-6;
    for (int i = 0; i < m.inv.l; ++i)
      for (int a = 0; a < m.alg.dim; ++a) {
        Vec hi = xi, lo = xi;
        hi[a] += h;
        lo[a] -= h;
        double fd = (eval_p(m.inv, m.alg, hi)[i] - eval_p(m.inv, m.alg, lo)[i]) / (2 * h);
        CHECK(std::abs(grads(i, a) - fd) < 1e-6 * (1 + std::abs(fd)));
      }
  }
}

TEST_CASE("so(5): second generator is sphere-orthogonal to p1^2") {
  // independent trapezoid quadrature over the unit circle in the rank plane
  auto m = make(Family::B, 2);
  const int n = 4000;
  double dot = 0.0, norm = 0.0;
  for (int k = 0; k < n; ++k) {
    double phi = 2 * M_PI * k / n;
    Vec t(2);
    t << std::cos(phi), std::sin(phi);
    double q2 = eval_p(m.inv, m.alg, m.cartan.embed(t))[1];
    dot += q2;  // p1^2 = 1 on the circle
    norm += q2 * q2;
  }
  CHECK(std::abs(dot / n) < 1e-10);
  CHECK(norm / n > 1e-3);  // nondegenerate after the correction
}

TEST_CASE("delta cloud: su(3) image fills the cusp region x^3 >= y^2") {
  auto& m = su3();
  auto cloud = delta_sample(m, {60, 0.0, 1.5}, false);
  REQUIRE(cloud.points.size() > 100);
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const Vec& p = cloud.points[i];
    CHECK(std::pow(p[0], 3) >= p[1] * p[1] - 1e-9);
    // provenance: the image is the evaluation at the recorded parameter
    Vec again = eval_p(m.inv, m.alg, m.cartan.embed(cloud.parameters[i]));
    CHECK((again - p).norm() < 1e-12);
  }
}

TEST_CASE("delta-prime cloud: su(3) unit-sphere image is [-1, 1] exactly") {
  auto cloud = delta_sample(su3(), {400, 0, 1}, true);
  double lo = 1e9, hi = -1e9;
  for (const Vec& p : cloud.points) {
    REQUIRE(p.size() == 1);
    lo = std::min(lo, p[0]);
    hi = std::max(hi, p[0]);
  }
  CHECK(std::abs(lo + 1.0) < 1e-6);
  CHECK(std::abs(hi - 1.0) < 1e-6);
}

TEST_CASE("delta-prime normalization: sup over the chamber sphere is 1") {
  for (auto [f, r] : {std::pair{Family::B, 2}, {Family::D, 4}}) {
    auto m = make(f, r);
    auto cloud = delta_sample(m, {24, 0, 1}, true);
    for (int i = 0; i < m.inv.l - 1; ++i) {
      double hi = 0.0;
      for (const Vec& p : cloud.points) hi = std::max(hi, std::abs(p[i]));
      CHECK(hi <= 1.0 + 1e-9);
      CHECK(hi > 0.2);
    }
  }
}

TEST_CASE("rank 1: empty p-prime and empty delta-prime image") {
  auto m = make(Family::A, 1);
  CHECK(eval_p_prime(m.inv, m.alg, Vec::Ones(3)).size() == 0);
  auto cloud = delta_sample(m, {4, 0, 1}, true);
  CHECK(cloud.points.size() == 1);
  CHECK(cloud.points[0].size() == 0);
  CHECK(m.out.elements_on_invariants.size() == 1);
  CHECK(m.out.elements_on_invariants[0].rows() == 0);
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(delta_sample(su3(), {1, 0, 1}, true), GridEmpty);
}

TEST_CASE("chevalley verification: orbit and Weyl invariance") {
  for (auto [f, r] : {std::pair{Family::A, 2}, {Family::B, 2}, {Family::D, 3}}) {
    auto m = make(f, r);
    auto rep = verify_chevalley(m, 40, 123);
    INFO("family " << family_letter(f) << " orbit " << rep.max_orbit_residual
                   << " weyl " << rep.max_weyl_residual);
    CHECK(rep.pass);
  }
}

TEST_CASE("chamber-to-image homeomorphism surrogate") {
  auto rep = verify_lemma2(su3(), 50);
  CHECK(rep.injective);
  CHECK(rep.min_interior_jacobian > 1e-6);
  CHECK(rep.max_wall_jacobian < 1e-6);  // degenerate on the chamber walls
  CHECK(rep.pass);

  auto rep1 = verify_lemma2(make(Family::A, 1), 20);
  CHECK(rep1.pass);
}

TEST_CASE("outer action on invariants: su(3) flips the cubic generator") {
  auto& m = su3();
  REQUIRE(m.out.elements_on_invariants.size() == 2);
  std::vector<double> vals;
  for (const Mat& ma : m.out.elements_on_invariants) {
    REQUIRE(ma.rows() == 1);
    vals.push_back(ma(0, 0));
  }
  std::sort(vals.begin(), vals.end());
  CHECK(std::abs(vals[0] + 1.0) < 1e-9);  // complex conjugation: p2 -> -p2
  CHECK(std::abs(vals[1] - 1.0) < 1e-9);
}

TEST_CASE("outer action equivariance on random points") {
  for (auto [f, r] : {std::pair{Family::A, 2}, {Family::D, 3}, {Family::D, 4}}) {
    auto m = make(f, r);
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
      Vec t = rng.gaussian_vector(m.alg.rank) * rng.uniform(0.4, 1.6);
      Vec base = eval_p_prime(m.inv, m.alg, m.cartan.embed(t));
      for (std::size_t a = 0; a < m.out.elements_on_t.size(); ++a) {
        Vec moved =
            eval_p_prime(m.inv, m.alg, m.cartan.embed(m.out.elements_on_t[a] * t));
        Vec predicted = m.out.elements_on_invariants[a] * base;
        CHECK((moved - predicted).cwiseAbs().maxCoeff() <
              1e-9 * (1 + base.cwiseAbs().maxCoeff()));
      }
    }
  }
}

TEST_CASE("so(8) triality acts linearly and forms a group on invariants") {
  auto m = make(Family::D, 4);  // construction itself enforces linearity
  REQUIRE(m.out.elements_on_invariants.size() == 6);
  // closure of the induced action
  for (const Mat& a : m.out.elements_on_invariants)
    for (const Mat& b : m.out.elements_on_invariants) {
      Mat prod = a * b;
      bool found = false;
      for (const Mat& c : m.out.elements_on_invariants)
        if (approx_equal(prod, c, 1e-7)) found = true;
      CHECK(found);
    }
  // a genuinely non-diagonal element exists (degree-4 generators mix)
  bool mixes = false;
  for (const Mat& a : m.out.elements_on_invariants)
    if (std::abs(a(0, 1)) > 0.1 || std::abs(a(1, 0)) > 0.1) mixes = true;
  CHECK(mixes);
}
