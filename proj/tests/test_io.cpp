#include <catch2/catch_amalgamated.hpp>

#include "lps/io.hpp"
#include "lps/poisson.hpp"

using namespace lps;

namespace {

Model& su3() {
  static Model m = build_model({Family::A, 2});
  return m;
}

}  // namespace

TEST_CASE("algebra descriptor round-trips bit-exactly") {
  for (auto [f, r] : {std::pair{Family::A, 2}, {Family::B, 2}, {Family::D, 3}}) {
    auto alg = build_algebra({f, r});
    Json j = algebra_to_json(alg);
    std::string text = j.dump();  // through the serialized form
    auto d = algebra_from_json(Json::parse(text));
    CHECK(d.family == family_letter(alg.family));
    CHECK(d.rank == alg.rank);
    CHECK(d.dim == alg.dim);
    std::size_t idx = 0;
    for (int i = 0; i < alg.dim; ++i)
      for (int jj = 0; jj < alg.dim; ++jj)
        for (int k = 0; k < alg.dim; ++k)
          CHECK(d.structure_constants[idx++] == alg.c(i, jj, k));  // bitwise
    idx = 0;
    for (int i = 0; i < alg.dim; ++i)
      for (int jj = 0; jj < alg.dim; ++jj)
        CHECK(d.inner_product[idx++] == alg.inner_product(i, jj));
    // a second serialization of the parsed data is byte-identical
    CHECK(Json::parse(text).dump() == text);
  }
}

TEST_CASE("roots report carries the group data") {
  Json j = roots_report_json(su3());
  CHECK(j["schema"] == 1);
  CHECK(j["roots"].size() == 6);
  CHECK(j["simple_roots"].size() == 2);
  CHECK(j["weyl_order"] == 6);
  CHECK(j["outer_order"] == 2);
  CHECK(j["cartan_matrix"][0][0] == 2);
  CHECK(j["cartan_matrix"][0][1] == -1);
}

TEST_CASE("delta cloud serialization") {
  auto cloud = delta_sample(su3(), {10, 0, 1}, true);
  std::string csv = delta_cloud_csv(cloud);
  CHECK(csv.rfind("param0,param1,image0\n", 0) == 0);
  // one header plus one row per point
  CHECK(std::count(csv.begin(), csv.end(), '\n') == cloud.points.size() + 1);

  Json j = delta_cloud_json(cloud, 42);
  CHECK(j["schema"] == 1);
  CHECK(j["seed"] == 42);
  CHECK(j["points"].size() == cloud.points.size());
  CHECK(vec_from_json(j["points"][0])[0] ==
        cloud.points[0][0]);  // doubles survive the trip
}

TEST_CASE("flow trajectory CSV") {
  auto& m = su3();
  Vec xi0 = Vec::Ones(8).normalized();
  auto states = hamiltonian_flow(m, fm_coordinate(8, 0), xi0, 0.05, 0.01);
  std::string csv = flow_csv(states);
  CHECK(csv.rfind("time,xi0", 0) == 0);
  CHECK(csv.find("hamiltonian") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == states.size() + 1);
}

TEST_CASE("verification reports share the schema envelope") {
  auto& m = su3();
  Json reports[] = {
      to_json(verify_jacobi(m.alg, nullptr, 20, 1), 1),
      to_json(verify_casimir(m.alg, fm_invariant(m, 0), 20, 1), 1),
      to_json(verify_chevalley(m, 5, 1), 1),
      to_json(verify_lemma2(m, 20), 1),
      to_json(verify_lemma_b(m.alg, fm_constant(8, 1.0), 20, 1), 1),
      to_json(su2_period_check(1.0, 2), 1),
      to_json(verify_su3(m), 1),
  };
  for (const Json& j : reports) {
    CHECK(j["schema"] == 1);
    CHECK(j["seed"] == 1);
    CHECK(j.contains("pass"));
  }
  // identical inputs give byte-identical reports
  CHECK(to_json(verify_jacobi(m.alg, nullptr, 20, 1), 1).dump() ==
        reports[0].dump());
}

TEST_CASE("casimir models round-trip through JSON") {
  Poly h(1);
  h += 0.25 * Poly::variable(1, 0);
  h += -1.5 * Poly::variable(1, 0).pow(3);
  auto c = CasimirModel::polynomial(h, true);
  auto back = casimir_from_json(Json::parse(casimir_to_json(c).dump()));
  CHECK(back.kind == CasimirModel::Kind::Polynomial);
  CHECK(back.exp_flag);
  for (double x = -1; x <= 1; x += 0.25)
    CHECK(back.eval_h((Vec(1) << x).finished()) ==
          c.eval_h((Vec(1) << x).finished()));

  auto g = CasimirModel::grid((Vec(1) << -1).finished(), (Vec(1) << 1).finished(),
                              {5}, {1, 2, 0, -1, 3});
  auto gback = casimir_from_json(Json::parse(casimir_to_json(g).dump()));
  CHECK(gback.kind == CasimirModel::Kind::Grid);
  for (double x = -1; x <= 1; x += 0.1)
    CHECK(gback.eval_h((Vec(1) << x).finished()) ==
          g.eval_h((Vec(1) << x).finished()));
}
