#ifndef CPTHETA_PIPELINE_HPP
#define CPTHETA_PIPELINE_HPP

#include <chrono>
#include <string>

#include "cptheta/dnn_solver.hpp"
#include "cptheta/extraction.hpp"
#include "cptheta/graph.hpp"
#include "cptheta/iso_oracle.hpp"
#include "cptheta/json_io.hpp"
#include "cptheta/sdp_model.hpp"

namespace cptheta {

struct PipelineOptions {
  SolverConfig solver;
  bool with_oracle_truth = false;
};

namespace detail {

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace detail

/// build -> solve -> decide for one pair, optionally attaching the exact
/// oracle's answer under its own key.
inline RunReport run_pipeline(const Graph& g1, const Graph& g2, const PipelineOptions& opts,
                              InstanceInfo info = {}) {
  if (g1.n() != g2.n())
    throw std::invalid_argument("graphs differ in size (" + std::to_string(g1.n()) + " vs " +
                                std::to_string(g2.n()) + ")");
  RunReport report;
  info.n = g1.n();
  info.g1_edges = g1.edge_count();
  info.g2_edges = g2.edge_count();
  report.instance = std::move(info);
  report.config = opts.solver;

  detail::Stopwatch clock;
  const Program program = build_program(g1, g2);
  report.timings.build_s = clock.lap();
  const SolverResult result = solve(program, opts.solver);
  report.timings.solve_s = clock.lap();
  report.solver = SolverSummary::of(result);
  report.verdict = decide(result, g1, g2, opts.solver);
  report.timings.decide_s = clock.lap();

  if (opts.with_oracle_truth) {
    EnumerateOptions eo;
    eo.cap = 1;
    eo.allow_large = true;
    const auto found = enumerate_isomorphisms(g1, g2, eo);
    OracleTruth truth;
    truth.isomorphic = !found.empty();
    if (truth.isomorphic) truth.witness = found.front();
    report.oracle = truth;
    report.timings.oracle_s = clock.lap();
  }
  return report;
}

}  // namespace cptheta

#endif  // CPTHETA_PIPELINE_HPP
