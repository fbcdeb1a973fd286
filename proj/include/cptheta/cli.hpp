#ifndef CPTHETA_CLI_HPP
#define CPTHETA_CLI_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cptheta/graph.hpp"
#include "cptheta/iso_oracle.hpp"
#include "cptheta/json_io.hpp"
#include "cptheta/pipeline.hpp"
#include "cptheta/sdp_model.hpp"

namespace cptheta::cli {

// Exit codes.
inline constexpr int kExitIsomorphic = 0;
inline constexpr int kExitNonIsomorphic = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitInconclusive = 3;
inline constexpr int kExitDiverged = 4;
inline constexpr int kExitBenchDisagreement = 5;

inline int exit_code_for(const Verdict& v) {
  if (v.solver_status == SolverStatus::kDiverged && v.kind == VerdictKind::kInconclusive)
    return kExitDiverged;
  switch (v.kind) {
    case VerdictKind::kIsomorphic: return kExitIsomorphic;
    case VerdictKind::kNonIsomorphic: return kExitNonIsomorphic;
    case VerdictKind::kInconclusive: return kExitInconclusive;
  }
  return kExitInconclusive;
}

struct BenchEntry {
  std::string name;
  std::string g1;
  std::string g2;
  bool isomorphic = false;
};

struct BenchRow {
  std::string name;
  RunReport report;
  bool truth = false;
  std::optional<bool> agrees;  // empty when the verdict is Inconclusive
};

inline std::vector<BenchEntry> read_manifest(const std::filesystem::path& dir) {
  const auto path = dir / "manifest.json";
  std::ifstream in(path);
  if (!in) throw ParseError(0, "missing manifest '" + path.string() + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
  std::vector<BenchEntry> out;
  for (const auto& p : doc.at("pairs"))
    out.push_back({p.at("name").get<std::string>(), p.at("g1").get<std::string>(),
                   p.at("g2").get<std::string>(), p.at("isomorphic").get<bool>()});
  return out;
}

inline Json bench_to_json(const std::vector<BenchRow>& rows) {
  Json out;
  Json jr = Json::array();
  int iso = 0, noniso = 0, inconclusive = 0, by_bound = 0, by_extraction = 0, by_oracle = 0,
      disagreements = 0;
  for (const auto& r : rows) {
    const auto& v = r.report.verdict;
    const double n = r.report.instance.n;
    Json row = {{"name", r.name},
                {"n", r.report.instance.n},
                {"objective", v.objective},
                {"gap_to_n", n - v.objective},
                {"threshold", v.threshold},
                {"verdict", std::string(to_string(v.kind))},
                {"route", std::string(to_string(v.route))},
                {"decided_by_bound", v.route == DecisionRoute::kBound},
                {"oracle_isomorphic", r.truth},
                {"solver_status", std::string(to_string(r.report.solver.status))},
                {"iterations", r.report.solver.iterations},
                {"seconds", r.report.timings.build_s + r.report.timings.solve_s +
                                r.report.timings.decide_s}};
    row["agrees"] = r.agrees ? Json(*r.agrees) : Json(nullptr);
    row["certificate"] = v.sigma ? Json(v.sigma->image()) : Json(nullptr);
    jr.push_back(std::move(row));
    switch (v.kind) {
      case VerdictKind::kIsomorphic: ++iso; break;
      case VerdictKind::kNonIsomorphic: ++noniso; break;
      case VerdictKind::kInconclusive: ++inconclusive; break;
    }
    if (v.route == DecisionRoute::kBound) ++by_bound;
    if (v.route == DecisionRoute::kConsistentSet || v.route == DecisionRoute::kBirkhoff)
      ++by_extraction;
    if (v.route == DecisionRoute::kOracle) ++by_oracle;
    if (r.agrees && !*r.agrees) ++disagreements;
  }
  out["rows"] = std::move(jr);
  out["summary"] = {{"pairs", rows.size()},
                    {"isomorphic", iso},
                    {"non_isomorphic", noniso},
                    {"inconclusive", inconclusive},
                    {"decided_by_bound", by_bound},
                    {"decided_by_extraction", by_extraction},
                    {"decided_by_oracle", by_oracle},
                    {"disagreements", disagreements}};
  return out;
}

inline void print_bench_table(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << std::left << std::setw(24) << "pair" << std::right << std::setw(4) << "n"
      << std::setw(16) << "objective" << std::setw(13) << "gap" << std::setw(16)
      << "threshold" << std::setw(15) << "verdict" << std::setw(16) << "route"
      << std::setw(7) << "truth" << std::setw(7) << "agree" << std::setw(10) << "sec" << '\n';
  for (const auto& r : rows) {
    const auto& v = r.report.verdict;
    const double secs =
        r.report.timings.build_s + r.report.timings.solve_s + r.report.timings.decide_s;
    out << std::left << std::setw(24) << r.name << std::right << std::setw(4)
        << r.report.instance.n << std::setw(16) << std::setprecision(10) << v.objective
        << std::setw(13) << std::setprecision(3) << std::scientific
        << (r.report.instance.n - v.objective) << std::defaultfloat << std::setw(16)
        << std::setprecision(10) << v.threshold << std::setw(15) << to_string(v.kind)
        << std::setw(16) << to_string(v.route) << std::setw(7) << (r.truth ? "iso" : "non")
        << std::setw(7) << (r.agrees ? (*r.agrees ? "yes" : "NO") : "n/a") << std::setw(10)
        << std::setprecision(3) << secs << '\n';
  }
  const auto summary = bench_to_json(rows).at("summary");
  out << "summary: " << summary.dump() << '\n';
}

inline std::vector<BenchRow> run_bench(const std::filesystem::path& dir,
                                       const PipelineOptions& opts, int jobs,
                                       bool verify_manifest) {
  const auto entries = read_manifest(dir);
  std::vector<std::pair<Graph, Graph>> graphs;
  for (const auto& e : entries) {
    graphs.emplace_back(read_graph_file((dir / e.g1).string()),
                        read_graph_file((dir / e.g2).string()));
    if (graphs.back().first.n() != graphs.back().second.n())
      throw ParseError(0, "pair '" + e.name + "': graphs differ in size");
    if (verify_manifest) {
      EnumerateOptions eo;
      eo.allow_large = true;
      if (are_isomorphic(graphs.back().first, graphs.back().second, eo) != e.isomorphic)
        throw ParseError(0, "pair '" + e.name + "': manifest ground truth is wrong");
    }
  }

  auto run_one = [&](std::size_t k) {
    BenchRow row;
    row.name = entries[k].name;
    row.truth = entries[k].isomorphic;
    row.report = run_pipeline(graphs[k].first, graphs[k].second, opts,
                              {entries[k].g1, entries[k].g2, 0, 0, 0});
    const auto kind = row.report.verdict.kind;
    if (kind != VerdictKind::kInconclusive)
      row.agrees = (kind == VerdictKind::kIsomorphic) == row.truth;
    return row;
  };

  std::vector<BenchRow> rows(entries.size());
  if (jobs <= 1) {
    for (std::size_t k = 0; k < entries.size(); ++k) rows[k] = run_one(k);
    return rows;
  }
  // Results land at their manifest position whatever the completion order.
  for (std::size_t start = 0; start < entries.size(); start += static_cast<std::size_t>(jobs)) {
    std::vector<std::future<BenchRow>> batch;
    for (std::size_t k = start; k < std::min(entries.size(), start + jobs); ++k)
      batch.push_back(std::async(std::launch::async, run_one, k));
    for (std::size_t k = 0; k < batch.size(); ++k) rows[start + k] = batch[k].get();
  }
  return rows;
}

inline void print_decide_text(const RunReport& r, std::ostream& out) {
  const auto& v = r.verdict;
  out << std::setprecision(17);
  out << "n: " << r.instance.n << '\n'
      << "solver: " << to_string(r.solver.status) << " after " << r.solver.iterations
      << " iterations (primal " << r.solver.primal_residual << ", dual "
      << r.solver.dual_residual << ")\n"
      << "objective: " << v.objective << '\n'
      << "threshold: " << v.threshold << '\n'
      << "verdict: " << to_string(v.kind) << " (route: " << to_string(v.route)
      << (v.oracle_assisted ? ", oracle-assisted" : "") << ")\n";
  if (v.sigma) out << "certificate: " << to_string(*v.sigma) << '\n';
  if (r.oracle) out << "oracle: " << (r.oracle->isomorphic ? "isomorphic" : "non-isomorphic") << '\n';
}

inline void add_solver_flags(CLI::App& cmd, SolverConfig& cfg, double& tol) {
  cmd.add_option("--tol", tol, "Primal and dual residual tolerance")
      ->envname("CPTHETA_TOL")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--max-iter", cfg.max_iter, "Iteration cap")
      ->envname("CPTHETA_MAX_ITER")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--seed", cfg.seed, "Seed echoed into reports")->envname("CPTHETA_SEED");
  cmd.add_option("--zero-eps", cfg.zero_eps, "Support threshold for extraction")
      ->envname("CPTHETA_ZERO_EPS")
      ->check(CLI::PositiveNumber);
  cmd.add_flag("--oracle-fallback", cfg.oracle_fallback,
               "Escalate inconclusive instances to the exact oracle")
      ->envname("CPTHETA_ORACLE_FALLBACK");
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph isomorphism via the completely positive theta program"};
  app.require_subcommand(1);

  std::string g1_path, g2_path, out_path, corpus_dir, report_path;
  SolverConfig cfg;
  double tol = cfg.tol_primal;
  bool json = false, with_truth = false, verify_manifest = false;
  int jobs = 1;
  long long cap = -1;

  auto* build = app.add_subcommand("build", "Write the program for a graph pair as JSON");
  build->add_option("g1", g1_path)->required();
  build->add_option("g2", g2_path)->required();
  build->add_option("-o,--out", out_path, "Output file (default: standard output)");

  auto* dec = app.add_subcommand("decide", "Solve and decide one graph pair");
  dec->add_option("g1", g1_path)->required();
  dec->add_option("g2", g2_path)->required();
  add_solver_flags(*dec, cfg, tol);
  dec->add_flag("--json", json, "Emit the run report as JSON");
  dec->add_flag("--truth", with_truth, "Attach the exact oracle answer to the report");

  auto* bench = app.add_subcommand("bench", "Run every pair of a corpus manifest");
  bench->add_option("corpus", corpus_dir)->required();
  add_solver_flags(*bench, cfg, tol);
  bench->add_flag("--json", json, "Print the JSON report instead of the table");
  bench->add_option("--report", report_path, "Also write the JSON report to this file");
  bench->add_option("--jobs", jobs, "Pairs solved concurrently")->check(CLI::PositiveNumber);
  bench->add_flag("--verify-manifest", verify_manifest,
                  "Recompute ground truth with the oracle before running");

  auto* oracle = app.add_subcommand("oracle", "Enumerate isomorphisms exactly");
  oracle->add_option("g1", g1_path)->required();
  oracle->add_option("g2", g2_path)->required();
  oracle->add_option("--cap", cap, "Stop after this many isomorphisms");
  oracle->add_flag("--json", json, "Emit JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInputError;
  }
  cfg.tol_primal = cfg.tol_dual = tol;

  try {
    if (*build) {
      const Graph g1 = read_graph_file(g1_path);
      const Graph g2 = read_graph_file(g2_path);
      if (g1.n() != g2.n()) throw ParseError(0, "graphs differ in size");
      const std::string doc = program_to_json(build_program(g1, g2)).dump() + "\n";
      if (out_path.empty()) {
        out << doc;
      } else {
        std::ofstream f(out_path);
        if (!f) throw ParseError(0, "cannot write '" + out_path + "'");
        f << doc;
      }
      return 0;
    }

    if (*dec) {
      detail::Stopwatch clock;
      const Graph g1 = read_graph_file(g1_path);
      const Graph g2 = read_graph_file(g2_path);
      const double parse_s = clock.lap();
      if (g1.n() != g2.n()) throw ParseError(0, "graphs differ in size");
      PipelineOptions opts{cfg, with_truth};
      RunReport report = run_pipeline(g1, g2, opts, {g1_path, g2_path, 0, 0, 0});
      report.timings.parse_s = parse_s;
      if (json)
        out << Json(report).dump(2) << '\n';
      else
        print_decide_text(report, out);
      return exit_code_for(report.verdict);
    }

    if (*bench) {
      const auto rows = run_bench(corpus_dir, PipelineOptions{cfg, false}, jobs, verify_manifest);
      const Json doc = bench_to_json(rows);
      if (!report_path.empty()) {
        std::ofstream f(report_path);
        if (!f) throw ParseError(0, "cannot write '" + report_path + "'");
        f << doc.dump(2) << '\n';
      }
      if (json)
        out << doc.dump(2) << '\n';
      else
        print_bench_table(rows, out);
      return doc.at("summary").at("disagreements").get<int>() > 0 ? kExitBenchDisagreement : 0;
    }

    if (*oracle) {
      const Graph g1 = read_graph_file(g1_path);
      const Graph g2 = read_graph_file(g2_path);
      EnumerateOptions eo;
      if (cap >= 0) eo.cap = static_cast<std::size_t>(cap);
      const auto isos = enumerate_isomorphisms(g1, g2, eo);
      if (json) {
        Json doc = {{"isomorphic", !isos.empty()}, {"count", isos.size()}};
        Json arr = Json::array();
        for (const auto& p : isos) arr.push_back(p.image());
        doc["isomorphisms"] = std::move(arr);
        out << doc.dump() << '\n';
      } else {
        out << (isos.empty() ? "non-isomorphic" : "isomorphic") << " (" << isos.size()
            << " isomorphisms)\n";
        for (const auto& p : isos) out << to_string(p) << '\n';
      }
      return isos.empty() ? kExitNonIsomorphic : kExitIsomorphic;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace cptheta::cli

#endif  // CPTHETA_CLI_HPP
