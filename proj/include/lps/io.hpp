#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "lps/expr.hpp"

namespace lps {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Basic helpers
// ---------------------------------------------------------------------------

inline Json json_vec(const Vec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline Json json_mat(const Mat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

inline Vec vec_from_json(const Json& a) {
  Vec v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[i] = a[i].get<double>();
  return v;
}

inline Mat mat_from_json(const Json& rows) {
  if (rows.empty()) return Mat(0, 0);
  Mat m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(i, j) = rows[i][j].get<double>();
  return m;
}

// envelope shared by every report: schema version and the seed that
// reproduces it
inline Json report_envelope(const std::string& kind, std::uint64_t seed) {
  Json j;
  j["schema"] = 1;
  j["kind"] = kind;
  j["seed"] = seed;
  return j;
}

// ---------------------------------------------------------------------------
// Algebra descriptor (bit-exact round trip at double precision)
// ---------------------------------------------------------------------------

struct AlgebraDescriptor {
  char family = 'A';
  int rank = 0;
  int dim = 0;
  std::vector<double> structure_constants;  // index (i*dim + j)*dim + k
  std::vector<double> inner_product;        // dim x dim Gram matrix, row-major
};

inline Json algebra_to_json(const LieAlgebraData& alg) {
  Json j;
  j["schema"] = 1;
  j["family"] = std::string(1, family_letter(alg.family));
  j["rank"] = alg.rank;
  j["dim"] = alg.dim;
  Json sc = Json::array();
  for (int i = 0; i < alg.dim; ++i)
    for (int jj = 0; jj < alg.dim; ++jj)
      for (int k = 0; k < alg.dim; ++k) sc.push_back(alg.c(i, jj, k));
  j["structure_constants"] = sc;
  Json ip = Json::array();
  for (int i = 0; i < alg.dim; ++i)
    for (int jj = 0; jj < alg.dim; ++jj) ip.push_back(alg.inner_product(i, jj));
  j["inner_product"] = ip;
  return j;
}

inline AlgebraDescriptor algebra_from_json(const Json& j) {
  AlgebraDescriptor d;
  d.family = j.at("family").get<std::string>().at(0);
  d.rank = j.at("rank").get<int>();
  d.dim = j.at("dim").get<int>();
  for (const auto& v : j.at("structure_constants"))
    d.structure_constants.push_back(v.get<double>());
  for (const auto& v : j.at("inner_product"))
    d.inner_product.push_back(v.get<double>());
  if (d.structure_constants.size() !=
      static_cast<std::size_t>(d.dim) * d.dim * d.dim)
    throw DimensionMismatch("structure constant count");
  return d;
}

// ---------------------------------------------------------------------------
// Root system / Weyl / outer report
// ---------------------------------------------------------------------------

inline Json roots_report_json(const Model& m) {
  Json j;
  j["schema"] = 1;
  j["kind"] = "roots";
  j["family"] = std::string(1, family_letter(m.alg.family));
  j["rank"] = m.alg.rank;
  Json roots = Json::array();
  for (const Vec& r : m.rs.roots) roots.push_back(json_vec(r));
  j["roots"] = roots;
  Json simple = Json::array();
  for (const Vec& r : m.rs.simple_roots) simple.push_back(json_vec(r));
  j["simple_roots"] = simple;
  Json cm = Json::array();
  for (int i = 0; i < m.rs.cartan_matrix.rows(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < m.rs.cartan_matrix.cols(); ++k)
      row.push_back(m.rs.cartan_matrix(i, k));
    cm.push_back(row);
  }
  j["cartan_matrix"] = cm;
  j["weyl_order"] = m.weyl.order();
  j["outer_order"] = m.out.elements_on_t.size();
  Json outs = Json::array();
  for (const Mat& f : m.out.elements_on_t) outs.push_back(json_mat(f));
  j["outer_on_cartan"] = outs;
  Json outsi = Json::array();
  for (const Mat& f : m.out.elements_on_invariants) outsi.push_back(json_mat(f));
  j["outer_on_invariants"] = outsi;
  return j;
}

// ---------------------------------------------------------------------------
// Delta clouds and flow trajectories
// ---------------------------------------------------------------------------

inline std::string delta_cloud_csv(const DeltaCloud& cloud) {
  std::ostringstream out;
  out.precision(17);
  if (cloud.points.empty()) return "";
  const int np = static_cast<int>(cloud.parameters[0].size());
  const int ni = static_cast<int>(cloud.points[0].size());
  for (int i = 0; i < np; ++i) out << "param" << i << ",";
  for (int i = 0; i < ni; ++i) out << "image" << i << (i + 1 < ni ? "," : "");
  out << "\n";
  for (std::size_t r = 0; r < cloud.points.size(); ++r) {
    for (int i = 0; i < np; ++i) out << cloud.parameters[r][i] << ",";
    for (int i = 0; i < ni; ++i)
      out << cloud.points[r][i] << (i + 1 < ni ? "," : "");
    out << "\n";
  }
  return out.str();
}

inline Json delta_cloud_json(const DeltaCloud& cloud, std::uint64_t seed) {
  Json j = report_envelope(cloud.sphere ? "delta-prime-cloud" : "delta-cloud", seed);
  Json params = Json::array(), points = Json::array();
  for (const Vec& p : cloud.parameters) params.push_back(json_vec(p));
  for (const Vec& p : cloud.points) points.push_back(json_vec(p));
  j["parameters"] = params;
  j["points"] = points;
  return j;
}

inline std::string flow_csv(const std::vector<FlowState>& states) {
  std::ostringstream out;
  out.precision(17);
  if (states.empty()) return "";
  const int dim = static_cast<int>(states[0].point.size());
  const int nd = static_cast<int>(states[0].diagnostics.size());
  out << "time";
  for (int i = 0; i < dim; ++i) out << ",xi" << i;
  out << ",norm2";
  for (int i = 0; i < nd - 2; ++i) out << ",p" << (i + 1);
  out << ",hamiltonian\n";
  for (const auto& st : states) {
    out << st.time;
    for (int i = 0; i < dim; ++i) out << "," << st.point[i];
    for (int i = 0; i < nd; ++i) out << "," << st.diagnostics[i];
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Verification reports
// ---------------------------------------------------------------------------

inline Json to_json(const JacobiReport& r, std::uint64_t seed) {
  Json j = report_envelope("jacobi", seed);
  j["samples"] = r.samples;
  j["max_residual"] = r.max_residual;
  j["tolerance"] = r.tolerance;
  j["worst_triple"] = {r.worst_triple[0], r.worst_triple[1], r.worst_triple[2]};
  j["pass"] = r.pass;
  return j;
}

inline Json to_json(const CasimirReport& r, std::uint64_t seed) {
  Json j = report_envelope("casimir", seed);
  j["samples"] = r.samples;
  j["max_residual"] = r.max_residual;
  j["worst_point"] = json_vec(r.worst_point);
  j["pass"] = r.pass;
  return j;
}

inline Json to_json(const ChevalleyReport& r, std::uint64_t seed) {
  Json j = report_envelope("chevalley", seed);
  j["trials"] = r.trials;
  j["max_orbit_residual"] = r.max_orbit_residual;
  j["max_weyl_residual"] = r.max_weyl_residual;
  j["pass"] = r.pass;
  return j;
}

inline Json to_json(const Lemma2Report& r, std::uint64_t seed) {
  Json j = report_envelope("chamber-chart", seed);
  j["injective"] = r.injective;
  j["min_interior_jacobian"] = r.min_interior_jacobian;
  j["max_wall_jacobian"] = r.max_wall_jacobian;
  j["pass"] = r.pass;
  return j;
}

inline Json to_json(const LemmaBReport& r, std::uint64_t seed) {
  Json j = report_envelope("rescaling-identity", seed);
  j["samples"] = r.samples;
  j["max_residual"] = r.max_residual;
  j["pass"] = r.pass;
  return j;
}

inline Json to_json(const Su2PeriodReport& r, std::uint64_t seed) {
  Json j = report_envelope("orbit-area", seed);
  j["radius"] = r.radius;
  j["refinements"] = r.refinements;
  j["area"] = r.area;
  j["expected"] = r.expected;
  j["rel_error"] = r.rel_error;
  j["pass"] = r.pass;
  return j;
}

inline Json to_json(const Su3Report& r, std::uint64_t seed) {
  Json j = report_envelope("su3-reference", seed);
  Json clauses = Json::array();
  for (const auto& c : r.clauses) {
    Json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["residual"] = c.residual;
    clauses.push_back(cj);
  }
  j["clauses"] = clauses;
  j["pass"] = r.pass;
  return j;
}

inline Json to_json(const EquivalenceReport& r, std::uint64_t seed) {
  Json j = report_envelope("classification", seed);
  j["equivalent"] = r.equivalent;
  j["witness_index"] = r.witness_index;
  j["witness"] = json_mat(r.witness);
  j["residual"] = r.residual;
  j["tolerance"] = r.tolerance;
  return j;
}

// ---------------------------------------------------------------------------
// Casimir models
// ---------------------------------------------------------------------------

inline Json casimir_to_json(const CasimirModel& c) {
  Json j;
  j["schema"] = 1;
  j["exp_flag"] = c.exp_flag;
  j["vars"] = c.vars;
  if (c.kind == CasimirModel::Kind::Polynomial) {
    j["kind"] = "polynomial";
    Json terms = Json::array();
    for (const auto& [k, coeff] : c.h.terms()) {
      Json t;
      t["exponents"] = k;
      t["coefficient"] = coeff;
      terms.push_back(t);
    }
    j["coefficients"] = terms;
  } else {
    j["kind"] = "grid";
    j["lo"] = json_vec(c.grid_lo);
    j["hi"] = json_vec(c.grid_hi);
    j["resolution"] = c.grid_res;
    j["values"] = c.grid_values;
  }
  return j;
}

inline CasimirModel casimir_from_json(const Json& j) {
  bool exp_flag = j.at("exp_flag").get<bool>();
  int vars = j.at("vars").get<int>();
  if (j.at("kind").get<std::string>() == "polynomial") {
    Poly h(vars);
    for (const auto& t : j.at("coefficients")) {
      Poly mono = Poly::constant(vars, t.at("coefficient").get<double>());
      auto exps = t.at("exponents").get<std::vector<int>>();
      for (int v = 0; v < vars; ++v)
        mono = mono * Poly::variable(vars, v).pow(exps[v]);
      h += mono;
    }
    return CasimirModel::polynomial(h, exp_flag);
  }
  return CasimirModel::grid(vec_from_json(j.at("lo")), vec_from_json(j.at("hi")),
                            j.at("resolution").get<std::vector<int>>(),
                            j.at("values").get<std::vector<double>>(), exp_flag);
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file: " + path);
  out << text;
}

}  // namespace lps
