#ifndef CPTHETA_EXTRACTION_HPP
#define CPTHETA_EXTRACTION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cptheta/dnn_solver.hpp"
#include "cptheta/graph.hpp"
#include "cptheta/iso_oracle.hpp"

namespace cptheta {

/// n - 1/(4 n^4): below this the completely positive optimum rules out an
/// isomorphism.
inline double nonisomorphism_threshold(int n) {
  const double nd = static_cast<double>(n);
  return nd - 1.0 / (4.0 * nd * nd * nd * nd);
}

/// Strict upper bound on the cp-rank of a feasible point (rank <= n^2, so
/// cp-rank <= n^2 (n^2 + 1) / 2 < n^4 for n >= 2).
inline long long cp_rank_bound(int n) {
  const long long r = static_cast<long long>(n) * n;
  return r * (r + 1) / 2;
}

/// X[i][j] = Y(ij,ij) with its row and column sums.
struct DiagonalAssignment {
  Eigen::MatrixXd x;
  Eigen::VectorXd row_sums;
  Eigen::VectorXd col_sums;

  int n() const noexcept { return static_cast<int>(x.rows()); }

  bool doubly_stochastic(double tol) const {
    return (row_sums.array() - 1.0).abs().maxCoeff() <= tol &&
           (col_sums.array() - 1.0).abs().maxCoeff() <= tol;
  }
};

inline DiagonalAssignment diagonal_matrix(const Eigen::MatrixXd& y, int n) {
  if (n < 1 || y.rows() < n * n || y.cols() < n * n)
    throw std::invalid_argument("diagonal_matrix: matrix smaller than n^2");
  DiagonalAssignment d;
  d.x.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d.x(i, j) = y(i * n + j, i * n + j);
  d.row_sums = d.x.rowwise().sum();
  d.col_sums = d.x.colwise().sum().transpose();
  return d;
}

struct WeightedPermutation {
  double weight = 0.0;
  Permutation sigma;
};

struct BirkhoffResult {
  std::vector<WeightedPermutation> terms;
  bool complete = false;  // false when the support stopped admitting a perfect matching

  Eigen::MatrixXd recompose(int n) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (const auto& t : terms)
      for (int i = 0; i < n; ++i) m(i, t.sigma(i)) += t.weight;
    return m;
  }
  double weight_sum() const {
    double s = 0.0;
    for (const auto& t : terms) s += t.weight;
    return s;
  }
};

namespace detail {

// Minimum-cost perfect assignment (Hungarian, O(n^3)) over a square cost
// table. Returns row -> column.
inline std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) assignment[p[j] - 1] = j - 1;
  return assignment;
}

// Best matching weight restricted to rows >= `from` with the given
// columns already taken, or -inf when the support has no perfect matching.
inline double best_completion(const Eigen::MatrixXd& x, const std::vector<char>& allowed,
                              int from, const std::vector<char>& taken) {
  const int n = static_cast<int>(x.rows());
  std::vector<int> cols;
  for (int j = 0; j < n; ++j)
    if (!taken[j]) cols.push_back(j);
  const int m = n - from;
  if (m == 0) return 0.0;
  // Forbidden cells cost more than any full assignment of allowed cells.
  const double big = 1.0 + 2.0 * n * std::max(1.0, x.cwiseAbs().maxCoeff());
  std::vector<std::vector<double>> cost(m, std::vector<double>(m));
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) {
      const int i = from + r, j = cols[c];
      cost[r][c] = allowed[i * n + j] ? -x(i, j) : big;
    }
  const auto a = hungarian(cost);
  double total = 0.0;
  for (int r = 0; r < m; ++r) {
    const int i = from + r, j = cols[a[r]];
    if (!allowed[i * n + j]) return -std::numeric_limits<double>::infinity();
    total += x(i, j);
  }
  return total;
}

// Maximum-weight perfect matching on the allowed cells; among optimal
// matchings (within tie_tol) the lexicographically smallest image array.
inline std::optional<Permutation> lex_max_matching(const Eigen::MatrixXd& x,
                                                   const std::vector<char>& allowed,
                                                   double tie_tol) {
  const int n = static_cast<int>(x.rows());
  std::vector<char> taken(n, 0);
  const double best = best_completion(x, allowed, 0, taken);
  if (!std::isfinite(best)) return std::nullopt;
  std::vector<int> image(n, -1);
  double prefix = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (taken[j] || !allowed[i * n + j]) continue;
      taken[j] = 1;
      const double rest = best_completion(x, allowed, i + 1, taken);
      if (std::isfinite(rest) && prefix + x(i, j) + rest >= best - tie_tol) {
        image[i] = j;
        prefix += x(i, j);
        break;
      }
      taken[j] = 0;
    }
    if (image[i] < 0) return std::nullopt;
  }
  return Permutation(std::move(image));
}

}  // namespace detail

/// Greedy Birkhoff-von Neumann peeling: repeatedly take the maximum-weight
/// perfect matching on the support {X > eps} (lexicographically smallest
/// among ties), record it with its smallest matched entry as weight, and
/// subtract. Stops once no entry exceeds eps.
inline BirkhoffResult birkhoff_decompose(const DiagonalAssignment& d, double eps) {
  const int n = d.n();
  if (!(eps > 0)) throw std::invalid_argument("birkhoff_decompose: eps must be positive");
  Eigen::MatrixXd x = d.x;
  BirkhoffResult out;
  const int max_rounds = n * n;
  const double tie_tol = 1e-9 * std::max(1.0, x.cwiseAbs().maxCoeff() * n);
  for (int round = 0; round < max_rounds; ++round) {
    std::vector<char> allowed(static_cast<std::size_t>(n) * n, 0);
    bool any = false;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (x(i, j) > eps) allowed[i * n + j] = any = 1;
    if (!any) {
      out.complete = true;
      return out;
    }
    auto sigma = detail::lex_max_matching(x, allowed, tie_tol);
    if (!sigma) return out;
    double w = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) w = std::min(w, x(i, (*sigma)(i)));
    for (int i = 0; i < n; ++i) {
      double& cell = x(i, (*sigma)(i));
      cell = cell == w ? 0.0 : cell - w;
    }
    out.terms.push_back({w, std::move(*sigma)});
  }
  out.complete = (x.array() <= eps).all();
  return out;
}

struct ConsistentSetOptions {
  std::size_t node_budget = 2'000'000;
};

/// Backtracking search for one column per row block with every selected
/// diagonal entry and every pairwise entry above eps. Rows go 0..n-1;
/// candidate columns by decreasing Y(ij,ij), ties by column index.
inline std::optional<Permutation> consistent_set_search(const Eigen::MatrixXd& y, int n,
                                                        double eps,
                                                        ConsistentSetOptions opts = {}) {
  if (n < 1 || y.rows() < n * n || y.cols() < n * n)
    throw std::invalid_argument("consistent_set_search: matrix smaller than n^2");
  std::vector<std::vector<int>> candidates(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (y(i * n + j, i * n + j) > eps) candidates[i].push_back(j);
    std::stable_sort(candidates[i].begin(), candidates[i].end(), [&](int a, int b) {
      return y(i * n + a, i * n + a) > y(i * n + b, i * n + b);
    });
    if (candidates[i].empty()) return std::nullopt;
  }

  std::vector<int> chosen(n, -1);
  std::vector<char> used(n, 0);
  std::size_t nodes = 0;
  auto extend = [&](auto&& self, int i) -> bool {
    if (i == n) return true;
    for (int j : candidates[i]) {
      if (used[j]) continue;
      if (++nodes > opts.node_budget) return false;
      const int a = i * n + j;
      bool ok = true;
      for (int k = 0; k < i && ok; ++k) ok = y(a, k * n + chosen[k]) > eps;
      if (!ok) continue;
      chosen[i] = j;
      used[j] = 1;
      if (self(self, i + 1)) return true;
      used[j] = 0;
      chosen[i] = -1;
    }
    return false;
  };
  if (!extend(extend, 0)) return std::nullopt;
  return Permutation(std::move(chosen));
}

enum class VerdictKind { kIsomorphic, kNonIsomorphic, kInconclusive };

inline constexpr std::string_view to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::kIsomorphic: return "Isomorphic";
    case VerdictKind::kNonIsomorphic: return "NonIsomorphic";
    case VerdictKind::kInconclusive: return "Inconclusive";
  }
  return "?";
}

inline VerdictKind verdict_kind_from_string(std::string_view s) {
  for (auto k : {VerdictKind::kIsomorphic, VerdictKind::kNonIsomorphic, VerdictKind::kInconclusive})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown verdict kind '" + std::string(s) + "'");
}

/// Which rung of the decision ladder produced the verdict.
enum class DecisionRoute { kNone, kSolverFailure, kBound, kConsistentSet, kBirkhoff, kOracle };

inline constexpr std::string_view to_string(DecisionRoute r) {
  switch (r) {
    case DecisionRoute::kNone: return "none";
    case DecisionRoute::kSolverFailure: return "solver-failure";
    case DecisionRoute::kBound: return "bound";
    case DecisionRoute::kConsistentSet: return "consistent-set";
    case DecisionRoute::kBirkhoff: return "birkhoff";
    case DecisionRoute::kOracle: return "oracle";
  }
  return "?";
}

inline DecisionRoute decision_route_from_string(std::string_view s) {
  for (auto r : {DecisionRoute::kNone, DecisionRoute::kSolverFailure, DecisionRoute::kBound,
                 DecisionRoute::kConsistentSet, DecisionRoute::kBirkhoff, DecisionRoute::kOracle})
    if (to_string(r) == s) return r;
  throw std::invalid_argument("unknown decision route '" + std::string(s) + "'");
}

struct Verdict {
  VerdictKind kind = VerdictKind::kInconclusive;
  DecisionRoute route = DecisionRoute::kNone;
  std::optional<Permutation> sigma;  // exactly verified whenever kind is Isomorphic
  int n = 0;
  double objective = 0.0;
  double threshold = 0.0;    // n - 1/(4 n^4)
  double bound_cutoff = 0.0; // threshold - 10 tol_primal, the value branch (b) compares to
  long long cp_rank_bound = 0;
  SolverStatus solver_status = SolverStatus::kMaxIter;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int consistent_set_attempts = 0;
  int birkhoff_candidates = 0;
  int certification_failures = 0;
  bool birkhoff_complete = false;
  bool oracle_assisted = false;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Decision ladder over a solver result:
///   (a) not converged                        -> Inconclusive
///   (b) objective below threshold - 10 tol   -> NonIsomorphic
///   (c) consistent set, then Birkhoff terms, each certified exactly
///   (d) otherwise Inconclusive, or the exact oracle when enabled.
inline Verdict decide(const SolverResult& result, const Graph& g1, const Graph& g2,
                      const SolverConfig& cfg = {}) {
  if (g1.n() != g2.n()) throw std::invalid_argument("decide: size mismatch");
  const int n = g1.n();
  Verdict v;
  v.n = n;
  v.objective = result.objective;
  v.threshold = nonisomorphism_threshold(n);
  v.bound_cutoff = v.threshold - 10.0 * cfg.tol_primal;
  v.cp_rank_bound = cp_rank_bound(n);
  v.solver_status = result.status;
  v.primal_residual = result.primal_residual;
  v.dual_residual = result.dual_residual;

  if (result.status != SolverStatus::kConverged) {
    v.route = DecisionRoute::kSolverFailure;
    return v;
  }
  if (result.objective < v.bound_cutoff) {
    v.kind = VerdictKind::kNonIsomorphic;
    v.route = DecisionRoute::kBound;
    return v;
  }

  const double eps = cfg.zero_eps;
  ++v.consistent_set_attempts;
  if (auto sigma = consistent_set_search(result.y, n, eps)) {
    if (is_isomorphism(*sigma, g1, g2)) {
      v.kind = VerdictKind::kIsomorphic;
      v.route = DecisionRoute::kConsistentSet;
      v.sigma = std::move(sigma);
      return v;
    }
    ++v.certification_failures;
  }

  const auto birkhoff = birkhoff_decompose(diagonal_matrix(result.y, n), eps);
  v.birkhoff_complete = birkhoff.complete;
  for (const auto& term : birkhoff.terms) {
    ++v.birkhoff_candidates;
    if (is_isomorphism(term.sigma, g1, g2)) {
      v.kind = VerdictKind::kIsomorphic;
      v.route = DecisionRoute::kBirkhoff;
      v.sigma = term.sigma;
      return v;
    }
    ++v.certification_failures;
  }

  if (cfg.oracle_fallback) {
    v.oracle_assisted = true;
    v.route = DecisionRoute::kOracle;
    EnumerateOptions opts;
    opts.cap = 1;
    opts.allow_large = true;
    auto found = enumerate_isomorphisms(g1, g2, opts);
    if (found.empty()) {
      v.kind = VerdictKind::kNonIsomorphic;
    } else {
      v.kind = VerdictKind::kIsomorphic;
      v.sigma = found.front();
    }
  }
  return v;
}

}  // namespace cptheta

#endif  // CPTHETA_EXTRACTION_HPP
