#ifndef CPTHETA_JSON_IO_HPP
#define CPTHETA_JSON_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cptheta/dnn_solver.hpp"
#include "cptheta/extraction.hpp"
#include "cptheta/sdp_model.hpp"

namespace cptheta {

using Json = nlohmann::json;

// Program documents are written for external solver cross-checks. Entries
// are [row, col, value] triples; indices follow the row-major pair order
// with omega last.
inline Json program_to_json(const Program& p) {
  Json doc;
  doc["dim"] = p.dim();
  doc["n"] = p.n();
  doc["index"] = {{"n", p.n()},
                  {"order", "row-major"},
                  {"pair_index", "i*n+j"},
                  {"omega", p.index().omega()}};
  Json obj = Json::array();
  for (const auto& e : p.objective()) obj.push_back({e.row, e.col, e.value});
  doc["objective"] = std::move(obj);
  Json rows = Json::array();
  for (const auto& c : p.constraints()) {
    Json entries = Json::array();
    for (const auto& e : c.entries) entries.push_back({e.row, e.col, e.value});
    rows.push_back({{"kind", std::string(to_string(c.kind))},
                    {"entries", std::move(entries)},
                    {"rhs", c.rhs}});
  }
  doc["constraints"] = std::move(rows);
  return doc;
}

inline Program program_from_json(const Json& doc) {
  const int n = doc.at("n").get<int>();
  auto entries = [](const Json& arr) {
    std::vector<MatrixEntry> out;
    for (const auto& t : arr)
      out.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<double>()});
    return out;
  };
  std::vector<Constraint> rows;
  for (const auto& c : doc.at("constraints"))
    rows.push_back({constraint_kind_from_string(c.at("kind").get<std::string>()),
                    entries(c.at("entries")), c.at("rhs").get<double>()});
  return Program(VertexPairIndex(n), entries(doc.at("objective")), std::move(rows));
}

inline void to_json(Json& j, const SolverConfig& c) {
  j = {{"tol_primal", c.tol_primal},   {"tol_dual", c.tol_dual},
       {"max_iter", c.max_iter},       {"step_rho", c.step_rho},
       {"zero_eps", c.zero_eps},       {"seed", c.seed},
       {"over_relaxation", c.over_relaxation},
       {"rebalance_every", c.rebalance_every},
       {"oracle_fallback", c.oracle_fallback}};
}

inline void from_json(const Json& j, SolverConfig& c) {
  j.at("tol_primal").get_to(c.tol_primal);
  j.at("tol_dual").get_to(c.tol_dual);
  j.at("max_iter").get_to(c.max_iter);
  j.at("step_rho").get_to(c.step_rho);
  j.at("zero_eps").get_to(c.zero_eps);
  j.at("seed").get_to(c.seed);
  j.at("over_relaxation").get_to(c.over_relaxation);
  j.at("rebalance_every").get_to(c.rebalance_every);
  j.at("oracle_fallback").get_to(c.oracle_fallback);
}

/// Everything from a SolverResult except the matrix itself.
struct SolverSummary {
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  SolverStatus status = SolverStatus::kMaxIter;
  double final_rho = 0.0;

  static SolverSummary of(const SolverResult& r) {
    return {r.objective, r.primal_residual, r.dual_residual, r.iterations, r.status, r.final_rho};
  }
  friend bool operator==(const SolverSummary&, const SolverSummary&) = default;
};

inline void to_json(Json& j, const SolverSummary& s) {
  j = {{"objective", s.objective},
       {"primal_residual", s.primal_residual},
       {"dual_residual", s.dual_residual},
       {"iterations", s.iterations},
       {"status", std::string(to_string(s.status))},
       {"final_rho", s.final_rho}};
}

inline void from_json(const Json& j, SolverSummary& s) {
  j.at("objective").get_to(s.objective);
  j.at("primal_residual").get_to(s.primal_residual);
  j.at("dual_residual").get_to(s.dual_residual);
  j.at("iterations").get_to(s.iterations);
  s.status = solver_status_from_string(j.at("status").get<std::string>());
  j.at("final_rho").get_to(s.final_rho);
}

inline void to_json(Json& j, const Verdict& v) {
  j = {{"kind", std::string(to_string(v.kind))},
       {"route", std::string(to_string(v.route))},
       {"n", v.n},
       {"objective", v.objective},
       {"threshold", v.threshold},
       {"bound_cutoff", v.bound_cutoff},
       {"cp_rank_bound", v.cp_rank_bound},
       {"solver_status", std::string(to_string(v.solver_status))},
       {"primal_residual", v.primal_residual},
       {"dual_residual", v.dual_residual},
       {"consistent_set_attempts", v.consistent_set_attempts},
       {"birkhoff_candidates", v.birkhoff_candidates},
       {"certification_failures", v.certification_failures},
       {"birkhoff_complete", v.birkhoff_complete},
       {"oracle_assisted", v.oracle_assisted}};
  j["certificate"] = v.sigma ? Json(v.sigma->image()) : Json(nullptr);
}

inline void from_json(const Json& j, Verdict& v) {
  v.kind = verdict_kind_from_string(j.at("kind").get<std::string>());
  v.route = decision_route_from_string(j.at("route").get<std::string>());
  j.at("n").get_to(v.n);
  j.at("objective").get_to(v.objective);
  j.at("threshold").get_to(v.threshold);
  j.at("bound_cutoff").get_to(v.bound_cutoff);
  j.at("cp_rank_bound").get_to(v.cp_rank_bound);
  v.solver_status = solver_status_from_string(j.at("solver_status").get<std::string>());
  j.at("primal_residual").get_to(v.primal_residual);
  j.at("dual_residual").get_to(v.dual_residual);
  j.at("consistent_set_attempts").get_to(v.consistent_set_attempts);
  j.at("birkhoff_candidates").get_to(v.birkhoff_candidates);
  j.at("certification_failures").get_to(v.certification_failures);
  j.at("birkhoff_complete").get_to(v.birkhoff_complete);
  j.at("oracle_assisted").get_to(v.oracle_assisted);
  const auto& cert = j.at("certificate");
  if (cert.is_null())
    v.sigma.reset();
  else
    v.sigma = Permutation(cert.get<std::vector<int>>());
}

struct InstanceInfo {
  std::string g1_path;
  std::string g2_path;
  int n = 0;
  std::size_t g1_edges = 0;
  std::size_t g2_edges = 0;

  friend bool operator==(const InstanceInfo&, const InstanceInfo&) = default;
};

inline void to_json(Json& j, const InstanceInfo& i) {
  j = {{"g1_path", i.g1_path}, {"g2_path", i.g2_path}, {"n", i.n},
       {"g1_edges", i.g1_edges}, {"g2_edges", i.g2_edges}};
}

inline void from_json(const Json& j, InstanceInfo& i) {
  j.at("g1_path").get_to(i.g1_path);
  j.at("g2_path").get_to(i.g2_path);
  j.at("n").get_to(i.n);
  j.at("g1_edges").get_to(i.g1_edges);
  j.at("g2_edges").get_to(i.g2_edges);
}

/// Exact ground truth, kept apart from the numerical verdict.
struct OracleTruth {
  bool isomorphic = false;
  std::optional<Permutation> witness;

  friend bool operator==(const OracleTruth&, const OracleTruth&) = default;
};

inline void to_json(Json& j, const OracleTruth& t) {
  j = {{"isomorphic", t.isomorphic}};
  j["witness"] = t.witness ? Json(t.witness->image()) : Json(nullptr);
}

inline void from_json(const Json& j, OracleTruth& t) {
  j.at("isomorphic").get_to(t.isomorphic);
  const auto& w = j.at("witness");
  if (w.is_null())
    t.witness.reset();
  else
    t.witness = Permutation(w.get<std::vector<int>>());
}

struct StageTimings {
  double parse_s = 0.0;
  double build_s = 0.0;
  double solve_s = 0.0;
  double decide_s = 0.0;
  double oracle_s = 0.0;

  friend bool operator==(const StageTimings&, const StageTimings&) = default;
};

inline void to_json(Json& j, const StageTimings& t) {
  j = {{"parse_s", t.parse_s}, {"build_s", t.build_s}, {"solve_s", t.solve_s},
       {"decide_s", t.decide_s}, {"oracle_s", t.oracle_s}};
}

inline void from_json(const Json& j, StageTimings& t) {
  j.at("parse_s").get_to(t.parse_s);
  j.at("build_s").get_to(t.build_s);
  j.at("solve_s").get_to(t.solve_s);
  j.at("decide_s").get_to(t.decide_s);
  j.at("oracle_s").get_to(t.oracle_s);
}

struct RunReport {
  InstanceInfo instance;
  SolverConfig config;
  SolverSummary solver;
  Verdict verdict;
  std::optional<OracleTruth> oracle;
  StageTimings timings;

  friend bool operator==(const RunReport& a, const RunReport& b) {
    return a.instance == b.instance && Json(a.config) == Json(b.config) &&
           a.solver == b.solver && a.verdict == b.verdict && a.oracle == b.oracle &&
           a.timings == b.timings;
  }
};

inline void to_json(Json& j, const RunReport& r) {
  j = {{"instance", r.instance}, {"config", r.config}, {"solver", r.solver},
       {"verdict", r.verdict},   {"timings", r.timings}};
  j["oracle"] = r.oracle ? Json(*r.oracle) : Json(nullptr);
}

inline void from_json(const Json& j, RunReport& r) {
  j.at("instance").get_to(r.instance);
  j.at("config").get_to(r.config);
  j.at("solver").get_to(r.solver);
  j.at("verdict").get_to(r.verdict);
  j.at("timings").get_to(r.timings);
  const auto& o = j.at("oracle");
  if (o.is_null())
    r.oracle.reset();
  else
    r.oracle = o.get<OracleTruth>();
}

}  // namespace cptheta

#endif  // CPTHETA_JSON_IO_HPP
