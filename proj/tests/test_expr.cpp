#include <catch2/catch_amalgamated.hpp>

#include "lps/expr.hpp"

using namespace lps;

namespace {

double eval1(const std::string& text, double x) {
  auto c = parse_casimir(text, 1);
  return c.eval_h((Vec(1) << x).finished());
}

double constant(const std::string& text) {
  auto c = parse_casimir(text, 1);
  return c.eval_h((Vec(1) << 0.0).finished());
}

}  // namespace

TEST_CASE("arithmetic: precedence and associativity") {
  CHECK(constant("1+2*3^2") == 19.0);
  CHECK(constant("(1+2)*2") == 6.0);
  CHECK(constant("2-3-4") == -5.0);
  CHECK(constant("12/4/3") == 1.0);
  CHECK(constant("2^3") == 8.0);
  CHECK(constant("-2^2") == -4.0);  // unary minus binds outside the power
  CHECK(constant(" 1 + .5 ") == 1.5);
}

TEST_CASE("polynomial folding") {
  auto c = parse_casimir("1+x^2/2", 1);
  CHECK(c.kind == CasimirModel::Kind::Polynomial);
  CHECK_FALSE(c.exp_flag);
  for (double x = -1; x <= 1; x += 0.25)
    CHECK(c.eval_h((Vec(1) << x).finished()) == 1.0 + x * x / 2.0);

  auto neg = parse_casimir("-x", 1);
  CHECK(neg.kind == CasimirModel::Kind::Polynomial);
  CHECK(eval1("-x", 0.3) == -0.3);
}

TEST_CASE("top-level exp becomes the positivity flag") {
  auto c = parse_casimir("exp(x/4)", 1);
  CHECK(c.kind == CasimirModel::Kind::Polynomial);
  CHECK(c.exp_flag);
  CHECK(c.eval_h((Vec(1) << 0.8).finished()) == 0.2);
  CHECK(c.eval_f_of_hval(c.eval_h((Vec(1) << 0.8).finished())) ==
        Catch::Approx(std::exp(0.2)).margin(1e-15));
}

TEST_CASE("several variables") {
  auto c = parse_casimir("2*x1 - 3*x2 + x3^2", 3);
  CHECK(c.kind == CasimirModel::Kind::Polynomial);
  Vec x(3);
  x << 0.5, -1.0, 2.0;
  CHECK(c.eval_h(x) == 2 * 0.5 + 3.0 + 4.0);
  // bare x is x1
  CHECK(parse_casimir("x", 3).eval_h(x) == 0.5);
}

TEST_CASE("non-polynomial expressions fall back to a sampled grid") {
  auto c = parse_casimir("1/(2+x)", 1, 201);
  CHECK(c.kind == CasimirModel::Kind::Grid);
  for (double x = -1; x <= 1; x += 0.1)
    CHECK(std::abs(c.eval_h((Vec(1) << x).finished()) - 1.0 / (2 + x)) < 1e-4);
}

TEST_CASE("rank-1 slice: constants only") {
  auto c = parse_casimir("2+3", 0);
  CHECK(c.kind == CasimirModel::Kind::Polynomial);
  CHECK(c.eval_h(Vec(0)) == 5.0);
  CHECK_THROWS_AS(parse_casimir("x", 0), DimensionMismatch);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_casimir("x^-1", 1), ParseError);
  CHECK_THROWS_AS(parse_casimir("x^y", 1), ParseError);
  CHECK_THROWS_AS(parse_casimir("1+", 1), ParseError);
  CHECK_THROWS_AS(parse_casimir("(x", 1), ParseError);
  CHECK_THROWS_AS(parse_casimir("y", 1), ParseError);
  CHECK_THROWS_AS(parse_casimir("exp x", 1), ParseError);
  CHECK_THROWS_AS(parse_casimir("", 1), ParseError);
  CHECK_THROWS_AS(parse_casimir("1/0", 1), ParseError);
  CHECK_THROWS_AS(parse_casimir("x2", 1), DimensionMismatch);
}
