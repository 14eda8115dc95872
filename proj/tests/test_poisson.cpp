#include <catch2/catch_amalgamated.hpp>

#include "lps/poisson.hpp"

using namespace lps;

namespace {

Model& su3() {
  static Model m = build_model({Family::A, 2});
  return m;
}

Model& su2() {
  static Model m = build_model({Family::A, 1});
  return m;
}

FunctionModel fm_norm(int dim) {
  return {dim, true, [](const Vec& xi) { return xi.norm(); },
          [](const Vec& xi) { return (xi / xi.norm()).eval(); }};
}

FunctionModel fm_exp(const FunctionModel& f) {
  return {f.dim, f.exact_gradient,
          [f](const Vec& xi) { return std::exp(f.value(xi)); },
          [f](const Vec& xi) {
            return (std::exp(f.value(xi)) * f.gradient(xi)).eval();
          }};
}

}  // namespace

TEST_CASE("bivector: antisymmetry exact and linear in the point") {
  auto& m = su3();
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    Vec xi = rng.gaussian_vector(8), eta = rng.gaussian_vector(8);
    Mat pi = poisson_eval(m.alg, xi).matrix;
    CHECK((pi + pi.transpose()).cwiseAbs().maxCoeff() == 0.0);
    Mat sum = poisson_eval(m.alg, xi + eta).matrix;
    CHECK((sum - pi - poisson_eval(m.alg, eta).matrix).cwiseAbs().maxCoeff() < 1e-12);
    // the point itself spans the kernel directions that matter: pi(xi) xi = 0
    CHECK((pi * xi).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("bracket: antisymmetry, self-bracket, structure-constant oracle") {
  auto& m = su2();
  Vec e3 = Vec::Zero(3);
  e3[2] = 1.0;
  auto x1 = fm_coordinate(3, 0), x2 = fm_coordinate(3, 1);
  CHECK(bracket_functions(m.alg, x1, x1, e3) == 0.0);
  double br = bracket_functions(m.alg, x1, x2, e3);
  CHECK(std::abs(br - m.alg.c(0, 1, 2)) < 1e-14);  // direct contraction
  CHECK(bracket_functions(m.alg, x2, x1, e3) == -br);
}

TEST_CASE("the squared norm brackets to zero with everything") {
  auto& m = su3();
  Poly norm2(8);
  for (int i = 0; i < 8; ++i) norm2 += Poly::variable(8, i) * Poly::variable(8, i);
  auto f = fm_polynomial(norm2);
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    Vec xi = rng.gaussian_vector(8);
    auto g = fm_coordinate(8, static_cast<int>(rng.integer(8)));
    CHECK(std::abs(bracket_functions(m.alg, f, g, xi)) < 1e-10);
    auto p2 = fm_invariant(m, 1);
    CHECK(std::abs(bracket_functions(m.alg, p2, g, xi)) < 1e-10 * (1 + xi.squaredNorm()));
  }
}

TEST_CASE("bracket bilinearity and Leibniz on polynomial models") {
  auto& m = su3();
  Rng rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    Poly pf(8), pg(8), ph(8);
    for (int t = 0; t < 3; ++t) {
      pf += rng.uniform(-1, 1) * Poly::variable(8, rng.integer(8)) *
            Poly::variable(8, rng.integer(8));
      pg += rng.uniform(-1, 1) * Poly::variable(8, rng.integer(8));
      ph += rng.uniform(-1, 1) * Poly::variable(8, rng.integer(8)) *
            Poly::variable(8, rng.integer(8));
    }
    auto F = fm_polynomial(pf), G = fm_polynomial(pg), H = fm_polynomial(ph);
    Vec xi = rng.gaussian_vector(8);
    double lhs = bracket_functions(m.alg, F, fm_product(G, H), xi);
    double rhs = bracket_functions(m.alg, F, G, xi) * H.value(xi) +
                 bracket_functions(m.alg, F, H, xi) * G.value(xi);
    CHECK(std::abs(lhs - rhs) < 1e-9 * (1 + std::abs(lhs)));
    // bilinearity
    double a = rng.uniform(-2, 2);
    auto aF = fm_product(fm_constant(8, a), F);
    CHECK(std::abs(bracket_functions(m.alg, aF, G, xi) -
                   a * bracket_functions(m.alg, F, G, xi)) < 1e-12 * (1 + std::abs(a * lhs)));
  }
}

TEST_CASE("sphere brackets do not depend on the extension") {
  auto& m = su3();
  Rng rng(45);
  for (int trial = 0; trial < 30; ++trial) {
    auto F = fm_zero_homogeneous(fm_coordinate(8, static_cast<int>(rng.integer(8))));
    auto G = fm_zero_homogeneous(fm_coordinate(8, static_cast<int>(rng.integer(8))));
    // alternative extension: multiply by the radius (equals F on the sphere)
    auto F2 = fm_product(F, fm_norm(8));
    Vec xi = rng.gaussian_vector(8).normalized();
    double a = bracket_functions(m.alg, F, G, xi);
    double b = bracket_functions(m.alg, F2, G, xi);
    CHECK(std::abs(a - b) < 1e-8 * (1 + std::abs(a)));
  }
}

TEST_CASE("Jacobi identity: undeformed sphere structure") {
  CHECK(verify_jacobi(su2().alg, nullptr, 100, 7).pass);
  auto rep = verify_jacobi(su3().alg, nullptr, 200, 7);
  INFO("max residual " << rep.max_residual);
  CHECK(rep.pass);
}

TEST_CASE("Jacobi identity: conformal Casimir deformation passes") {
  auto& m = su3();
  ConformalFactor f = [&m](const Vec& xi) {
    double x = eval_p_prime(m.inv, m.alg, xi.normalized())[0];
    return 1.0 + x * x / 2.0;
  };
  auto rep = verify_jacobi(m.alg, &f, 200, 11);
  INFO("max residual " << rep.max_residual);
  CHECK(rep.pass);
}

TEST_CASE("Jacobi identity: non-Casimir factor is detected") {
  auto& m = su3();
  ConformalFactor bad = [](const Vec& xi) { return 1.0 + xi[0] / xi.norm(); };
  auto rep = verify_jacobi(m.alg, &bad, 200, 13);
  CHECK_FALSE(rep.pass);
  CHECK(rep.max_residual > 1e-3);
}

TEST_CASE("Casimir verification") {
  for (Model* mp : {&su3(), &su2()}) {
    for (int i = 0; i < mp->inv.l; ++i)
      CHECK(verify_casimir(mp->alg, fm_invariant(*mp, i), 100, 17).pass);
  }
  auto rep = verify_casimir(su3().alg, fm_coordinate(8, 0), 100, 17);
  CHECK_FALSE(rep.pass);
  CHECK(rep.max_residual > 1e-3);
  // constants bracket to exact zero
  auto rc = verify_casimir(su3().alg, fm_constant(8, 3.5), 50, 17);
  CHECK(rc.max_residual == 0.0);
}

TEST_CASE("rescaling map basics") {
  auto one = fm_constant(8, 1.0);
  Vec xi = Vec::Unit(8, 3);
  CHECK((phi_tilde_f(one, xi, 1.0) - xi).norm() == 0.0);
  CHECK((phi_tilde_f(one, xi, 2.0) - xi / 2).norm() == 0.0);
  CHECK_THROWS_AS(phi_tilde_f(one, xi, -1.0), NonPositiveCasimir);
  CHECK_THROWS_AS(phi_tilde_f(fm_constant(8, -2.0), xi, 1.0), NonPositiveCasimir);
}

TEST_CASE("pushforward bracket identity: trivial factor is exact") {
  auto rep = verify_lemma_b(su3().alg, fm_constant(8, 1.0), 200, 19);
  CHECK(rep.max_residual < 1e-12);
  CHECK(rep.pass);
}

TEST_CASE("pushforward bracket identity: exponential Casimir factor") {
  auto& m = su3();
  auto f = fm_exp(fm_product(fm_constant(8, 0.25),
                             fm_zero_homogeneous(fm_invariant(m, 1))));
  auto rep = verify_lemma_b(m.alg, f, 500, 23);
  INFO("max residual " << rep.max_residual);
  CHECK(rep.pass);
}

TEST_CASE("flow: constant and Casimir Hamiltonians are stationary") {
  auto& m = su3();
  Vec xi0 = Vec::Ones(8).normalized();
  auto states = hamiltonian_flow(m, fm_constant(8, 2.0), xi0, 1.0, 0.01);
  CHECK((states.back().point - xi0).norm() == 0.0);
  auto states2 = hamiltonian_flow(m, fm_invariant(m, 0), xi0, 1.0, 0.01);
  CHECK((states2.back().point - xi0).norm() < 1e-8);
}

TEST_CASE("flow: rank-1 rotation closes after one period") {
  auto& m = su2();
  double omega = std::abs(m.alg.c(0, 1, 2));
  Vec xi0(3);
  xi0 << 0.3, -0.2, 0.9;
  auto states =
      hamiltonian_flow(m, fm_coordinate(3, 2), xi0, 2 * M_PI / omega, 1e-3);
  CHECK((states.back().point - xi0).norm() < 1e-6);
  // half a period is far from closed
  auto half = hamiltonian_flow(m, fm_coordinate(3, 2), xi0, M_PI / omega, 1e-3);
  CHECK((half.back().point - xi0).norm() > 0.1);
}

TEST_CASE("flow: conservation along a coordinate Hamiltonian") {
  auto& m = su3();
  Vec xi0 = Vec::Ones(8).normalized();
  auto states = hamiltonian_flow(m, fm_coordinate(8, 0), xi0, 10.0, 1e-3);
  const Vec& first = states.front().diagnostics;
  for (const auto& st : states)
    for (int i = 0; i < first.size(); ++i)
      CHECK(std::abs(st.diagnostics[i] - first[i]) < 1e-6 * (1 + std::abs(first[i])));
  CHECK(states.back().time == Catch::Approx(10.0).margin(1e-9));
}

TEST_CASE("flow: oversized step is rejected") {
  auto& m = su2();
  Vec xi0(3);
  xi0 << 1.0, 0.0, 0.5;
  CHECK_THROWS_AS(hamiltonian_flow(m, fm_coordinate(3, 2), xi0, 50.0, 0.8),
                  StepSizeRejected);
  CHECK_THROWS_AS(hamiltonian_flow(m, fm_coordinate(3, 2), xi0, 1.0, -0.1),
                  StepSizeRejected);
}

TEST_CASE("orbit area matches the minimal-period pairing") {
  for (double r : {0.5, 1.0, 2.0}) {
    auto rep = su2_period_check(r, 4);
    INFO("r = " << r << " rel error " << rep.rel_error);
    CHECK(rep.pass);
    // both sides scale linearly in r
    CHECK(rel_residual(rep.expected, r * su2_period_check(1.0, 1).expected) < 1e-12);
  }
  CHECK_THROWS_AS(su2_period_check(1.0, 0), MeshTooCoarse);
}

TEST_CASE("orbit area quadrature converges at better than 8x per refinement") {
  double prev = -1.0;
  for (int k = 1; k <= 3; ++k) {
    auto rep = su2_period_check(1.0, k);
    if (prev > 0) {
      INFO("refinement " << k << ": error ratio " << prev / rep.rel_error);
      CHECK(prev / rep.rel_error >= 8.0);
    }
    prev = rep.rel_error;
  }
}
