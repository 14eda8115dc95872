// Command-line front end: build algebras, run verification suites, emit
// orbit-space point clouds and flow trajectories, classify Casimir pairs.
//
// Exit codes: 0 = success / all verifications pass, 1 = a verification
// failed, 2 = usage or input error.

#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lps/io.hpp"

namespace {

using namespace lps;

struct Options {
  std::string family = "A";
  int rank = 2;
  std::uint64_t seed = 0;
  double tol = 0.0;  // 0 = per-operation defaults
  int grid = 50;
  std::string out;
  std::string format = "json";
  int samples = 200;
};

LieAlgebraSpec spec_of(const Options& o) {
  if (o.family.size() != 1) throw UnsupportedFamily(o.family);
  return {family_from_letter(o.family[0]), o.rank};
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty())
    std::cout << text << "\n";
  else
    write_text(o.out, text);
}

void emit_json(const Options& o, const Json& j) { emit(o, j.dump(2)); }

// one model per (family, rank), built on demand
Model& model_for(const Options& o) {
  static std::map<std::pair<char, int>, Model> cache;
  auto key = std::make_pair(o.family[0], o.rank);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, build_model(spec_of(o))).first;
  return it->second;
}

Json verify_one(const Options& o, const std::string& which,
                const std::string& deform_expr, double radius, int refinements,
                bool& pass) {
  Model& m = model_for(o);
  const int slice_vars = m.alg.rank - 1;

  if (which == "jacobi") {
    ConformalFactor factor;
    JacobiReport rep;
    if (deform_expr.empty()) {
      rep = verify_jacobi(m.alg, nullptr, o.samples, o.seed);
    } else {
      factor = deformation(m, parse_casimir(deform_expr, slice_vars, o.grid));
      rep = verify_jacobi(m.alg, &factor, o.samples, o.seed);
    }
    if (o.tol > 0) {
      rep.tolerance = o.tol;
      rep.pass = rep.max_residual < o.tol;
    }
    pass = rep.pass;
    return to_json(rep, o.seed);
  }
  if (which == "casimir") {
    Json all = report_envelope("casimir-suite", o.seed);
    Json items = Json::array();
    bool ok = true;
    for (int i = 0; i < m.inv.l; ++i) {
      auto rep = verify_casimir(m.alg, fm_invariant(m, i), o.samples, o.seed);
      ok = ok && rep.pass;
      items.push_back(to_json(rep, o.seed));
    }
    all["generators"] = items;
    all["pass"] = ok;
    pass = ok;
    return all;
  }
  if (which == "chevalley") {
    auto rep = verify_chevalley(m, std::max(o.samples, 1), o.seed);
    pass = rep.pass;
    return to_json(rep, o.seed);
  }
  if (which == "lemma2") {
    auto rep = verify_lemma2(m, o.grid);
    pass = rep.pass;
    return to_json(rep, o.seed);
  }
  if (which == "lemma-b") {
    FunctionModel f =
        deform_expr.empty()
            ? fm_constant(m.alg.dim, 1.0)
            : casimir_function(m, parse_casimir(deform_expr, slice_vars, o.grid));
    auto rep = verify_lemma_b(m.alg, f, o.samples, o.seed);
    pass = rep.pass;
    return to_json(rep, o.seed);
  }
  if (which == "su3") {
    auto rep = verify_su3(m, false);
    pass = rep.pass;
    return to_json(rep, o.seed);
  }
  if (which == "su2-area") {
    auto rep = su2_period_check(radius, refinements);
    pass = rep.pass;
    return to_json(rep, o.seed);
  }
  throw Error("unknown verification: " + which);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace lps;
  CLI::App app{"invariant-theory toolkit for compact semisimple Lie algebras"};
  app.require_subcommand(1);

  Options o;
  app.add_option("--family", o.family, "algebra family: A, B, C or D");
  app.add_option("--rank", o.rank, "algebra rank");
  app.add_option("--seed", o.seed, "random seed recorded in every report");
  app.add_option("--tol", o.tol, "override pass tolerance (0 = defaults)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--grid", o.grid, "grid resolution");
  app.add_option("--out", o.out, "output path (default: stdout)");
  app.add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--samples", o.samples, "number of verification samples");

  auto* cmd_algebra = app.add_subcommand("algebra", "algebra construction");
  cmd_algebra->add_subcommand("info", "descriptor and axiom residuals");

  app.add_subcommand("roots", "root system, Weyl and outer groups");
  app.add_subcommand("weyl", "Weyl group elements");

  auto* cmd_inv = app.add_subcommand("invariants", "invariant generators");
  std::string point_csv;
  auto* cmd_eval = cmd_inv->add_subcommand("eval", "evaluate the generators");
  cmd_eval->add_option("--point", point_csv, "comma-separated coordinates");
  bool sphere_cloud = false;
  auto* cmd_delta = cmd_inv->add_subcommand("sample-delta", "orbit-space cloud");
  cmd_delta->add_flag("--prime", sphere_cloud, "unit-sphere slice instead of the cone");

  auto* cmd_verify = app.add_subcommand("verify", "verification suites");
  std::string deform_expr;
  double radius = 1.0;
  int refinements = 5;
  cmd_verify->add_option("--deform", deform_expr,
                         "conformal factor as an expression in the slice coordinates");
  cmd_verify->add_option("--radius", radius, "orbit radius for su2-area");
  cmd_verify->add_option("--refine", refinements, "mesh refinements for su2-area");
  std::vector<std::string> verify_kinds;
  for (const char* k :
       {"jacobi", "casimir", "chevalley", "lemma2", "lemma-b", "su3", "su2-area",
        "all"})
    cmd_verify->add_subcommand(k)->callback([&verify_kinds, k] {
      verify_kinds.push_back(k);
    });
  cmd_verify->require_subcommand(1);

  auto* cmd_flow = app.add_subcommand("flow", "Hamiltonian flow trajectory");
  int ham_coord = 0;
  double T = 10.0, dt = 1e-3;
  cmd_flow->add_option("--coordinate", ham_coord, "Hamiltonian coordinate index");
  cmd_flow->add_option("--time", T, "total integration time");
  cmd_flow->add_option("--dt", dt, "integrator step");
  cmd_flow->add_option("--deform", deform_expr, "conformal factor expression");

  auto* cmd_classify = app.add_subcommand("classify", "Casimir pair classification");
  std::string f_expr, g_expr;
  cmd_classify->add_option("--f", f_expr, "first model")->required();
  cmd_classify->add_option("--g", g_expr, "second model")->required();

  // allow global flags to appear after the subcommand name
  std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
    a->fallthrough();
    for (CLI::App* sub : a->get_subcommands(nullptr)) enable_fallthrough(sub);
  };
  enable_fallthrough(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_algebra->parsed()) {
      Model& m = model_for(o);
      Json j = algebra_to_json(m.alg);
      auto axioms = check_algebra_axioms(m.alg);
      j["simple"] = m.alg.simple;
      j["axiom_residuals"] = {{"antisymmetry", axioms.antisymmetry},
                              {"jacobi", axioms.jacobi},
                              {"ad_invariance", axioms.ad_invariance}};
      emit_json(o, j);
      return 0;
    }
    if (app.get_subcommand("roots")->parsed()) {
      emit_json(o, roots_report_json(model_for(o)));
      return 0;
    }
    if (app.get_subcommand("weyl")->parsed()) {
      Model& m = model_for(o);
      Json j = report_envelope("weyl", o.seed);
      j["order"] = m.weyl.order();
      Json els = Json::array();
      for (const Mat& w : m.weyl.elements) els.push_back(json_mat(w));
      j["elements"] = els;
      emit_json(o, j);
      return 0;
    }
    if (cmd_inv->parsed()) {
      Model& m = model_for(o);
      if (cmd_eval->parsed()) {
        Vec xi;
        if (point_csv.empty()) {
          Rng rng(o.seed);
          xi = rng.gaussian_vector(m.alg.dim).normalized();
        } else {
          std::vector<double> vals;
          std::stringstream ss(point_csv);
          std::string item;
          while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
          if (static_cast<int>(vals.size()) != m.alg.dim)
            throw DimensionMismatch("--point needs " + std::to_string(m.alg.dim) +
                                    " coordinates");
          xi = Eigen::Map<Vec>(vals.data(), vals.size());
        }
        Json j = report_envelope("invariants-eval", o.seed);
        j["point"] = json_vec(xi);
        j["p"] = json_vec(eval_p(m.inv, m.alg, xi));
        j["degrees"] = m.inv.degrees;
        emit_json(o, j);
        return 0;
      }
      auto cloud = delta_sample(m, {o.grid, 0.0, 1.5}, sphere_cloud);
      if (o.format == "csv")
        emit(o, delta_cloud_csv(cloud));
      else
        emit_json(o, delta_cloud_json(cloud, o.seed));
      return 0;
    }
    if (cmd_verify->parsed()) {
      std::vector<std::string> kinds = verify_kinds;
      if (kinds.size() == 1 && kinds[0] == "all") {
        kinds = {"jacobi", "casimir", "chevalley", "lemma2", "lemma-b"};
        Family fam = spec_of(o).family;
        if (fam == Family::A && o.rank == 2) kinds.push_back("su3");
        if (fam == Family::A && o.rank == 1) kinds.push_back("su2-area");
      }
      bool all_pass = true;
      Json out = report_envelope("verification", o.seed);
      Json items = Json::array();
      for (const auto& k : kinds) {
        bool pass = false;
        items.push_back(verify_one(o, k, deform_expr, radius, refinements, pass));
        all_pass = all_pass && pass;
      }
      out["reports"] = items;
      out["pass"] = all_pass;
      emit_json(o, out);
      return all_pass ? 0 : 1;
    }
    if (cmd_flow->parsed()) {
      Model& m = model_for(o);
      if (ham_coord < 0 || ham_coord >= m.alg.dim)
        throw DimensionMismatch("--coordinate out of range");
      Rng rng(o.seed);
      Vec xi0 = rng.gaussian_vector(m.alg.dim).normalized();
      ConformalFactor factor;
      const ConformalFactor* fp = nullptr;
      if (!deform_expr.empty()) {
        factor = deformation(m, parse_casimir(deform_expr, m.alg.rank - 1, o.grid));
        fp = &factor;
      }
      auto states =
          hamiltonian_flow(m, fm_coordinate(m.alg.dim, ham_coord), xi0, T, dt, fp);
      if (o.format == "csv") {
        emit(o, flow_csv(states));
      } else {
        Json j = report_envelope("flow", o.seed);
        j["steps"] = states.size();
        j["initial"] = json_vec(states.front().point);
        j["final"] = json_vec(states.back().point);
        j["final_diagnostics"] = json_vec(states.back().diagnostics);
        emit_json(o, j);
      }
      return 0;
    }
    if (cmd_classify->parsed()) {
      Model& m = model_for(o);
      auto f = parse_casimir(f_expr, m.alg.rank - 1, o.grid);
      auto g = parse_casimir(g_expr, m.alg.rank - 1, o.grid);
      auto grid = delta_sample(m, {std::max(o.grid, 2), 0, 1}, true).points;
      auto rep = classify_pair(f, g, m.out, grid);
      emit_json(o, to_json(rep, o.seed));
      return 0;
    }
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
