#ifndef CPTHETA_LIFT_ALGEBRA_HPP
#define CPTHETA_LIFT_ALGEBRA_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cptheta/graph.hpp"
#include "cptheta/iso_oracle.hpp"
#include "cptheta/symmetric_eigen.hpp"

namespace cptheta {

inline constexpr double kDefaultFeasibilityTol = 1e-6;
inline constexpr double kDefaultDecomposeTol = 1e-4;

/// A permutation together with its rank-one lift vec(P)·vec(P)^T, where
/// P is the permutation matrix with P[i][sigma(i)] = 1.
class PermutationLift {
 public:
  explicit PermutationLift(Permutation sigma) : sigma_(std::move(sigma)) {}

  const Permutation& sigma() const noexcept { return sigma_; }
  int n() const noexcept { return sigma_.size(); }

  /// vec(P_sigma) in row-major pair order, length n^2.
  Eigen::VectorXd vector() const {
    const int n = this->n();
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n * n);
    for (int i = 0; i < n; ++i) v[i * n + sigma_(i)] = 1.0;
    return v;
  }

  /// The n^2 x n^2 lift.
  Eigen::MatrixXd matrix() const {
    const Eigen::VectorXd v = vector();
    return v * v.transpose();
  }

  /// The lift bordered by the omega row/column (entry 1 at omega,omega),
  /// i.e. the Gram matrix of (vec P_sigma, 1).
  Eigen::MatrixXd extended() const {
    const int n = this->n();
    Eigen::VectorXd v(n * n + 1);
    v.head(n * n) = vector();
    v[n * n] = 1.0;
    return v * v.transpose();
  }

  double entry(int row, int col) const {
    const int n = this->n();
    return (sigma_(row / n) == row % n && sigma_(col / n) == col % n) ? 1.0 : 0.0;
  }

 private:
  Permutation sigma_;
};

inline PermutationLift lift(const Permutation& sigma) { return PermutationLift(sigma); }

/// One violated program condition: which of the eight, where it is worst,
/// and by how much.
struct Violation {
  int condition = 0;
  int row = -1;
  int col = -1;
  double magnitude = 0.0;
};

struct FeasibilityReport {
  std::vector<Violation> violations;

  bool feasible() const noexcept { return violations.empty(); }
  bool has(int condition) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.condition == condition; });
  }
  double worst() const {
    double w = 0.0;
    for (const auto& v : violations) w = std::max(w, v.magnitude);
    return w;
  }
};

namespace detail {

class WorstTracker {
 public:
  explicit WorstTracker(int condition) { v_.condition = condition; }
  void offer(double magnitude, int row, int col) {
    if (magnitude > v_.magnitude) v_ = {v_.condition, row, col, magnitude};
  }
  void flush(FeasibilityReport& report, double tol) const {
    if (v_.magnitude > tol) report.violations.push_back(v_);
  }

 private:
  Violation v_;
};

}  // namespace detail

/// Audits an (n^2+1)-square candidate against the DNN version of the
/// program: PSD (with relative slack tol*(1+|Y|_F)), nonnegativity, the
/// omega normalization, the diagonal link and the four zero patterns.
/// Complete positivity is not checked.
inline FeasibilityReport check_feasible(const Eigen::MatrixXd& y, const Graph& g1,
                                        const Graph& g2, double tol = kDefaultFeasibilityTol) {
  if (g1.n() != g2.n()) throw std::invalid_argument("check_feasible: graph size mismatch");
  const int n = g1.n();
  const VertexPairIndex idx(n);
  if (y.rows() != idx.dim() || y.cols() != idx.dim())
    throw std::invalid_argument("check_feasible: expected " + std::to_string(idx.dim()) +
                                "-square matrix");
  if (tol < 0) throw std::invalid_argument("check_feasible: negative tolerance");
  if ((y - y.transpose()).cwiseAbs().maxCoeff() > std::max(tol, 1e-12))
    throw std::invalid_argument("check_feasible: matrix is not symmetric");

  FeasibilityReport report;
  const int w = idx.omega();

  {
    const double min_eig = symmetric_eigen(y).values[0];
    if (-min_eig > tol * (1.0 + y.norm())) report.violations.push_back({1, -1, -1, -min_eig});
  }
  {
    detail::WorstTracker t(2);
    for (int c = 0; c < y.cols(); ++c)
      for (int r = c; r < y.rows(); ++r)
        if (y(r, c) < 0) t.offer(-y(r, c), r, c);
    t.flush(report, tol);
  }
  {
    detail::WorstTracker t(3);
    t.offer(std::abs(y(w, w) - 1.0), w, w);
    t.flush(report, tol);
  }
  {
    detail::WorstTracker t(4);
    for (int a = 0; a < n * n; ++a) t.offer(std::abs(y(a, w) - y(a, a)), a, w);
    t.flush(report, tol);
  }
  detail::WorstTracker row(5), col(6), mis1(7), mis2(8);
  for (int a = 0; a < n * n; ++a) {
    const auto [i, j] = idx.pair(a);
    for (int b = a + 1; b < n * n; ++b) {
      const auto [k, l] = idx.pair(b);
      const double mag = std::abs(y(a, b));
      if (i == k) row.offer(mag, a, b);
      if (j == l) col.offer(mag, a, b);
      if (i != k && j != l) {
        if (g1.adjacent(i, k) && !g2.adjacent(j, l)) mis1.offer(mag, a, b);
        if (!g1.adjacent(i, k) && g2.adjacent(j, l)) mis2.offer(mag, a, b);
      }
    }
  }
  row.flush(report, tol);
  col.flush(report, tol);
  mis1.flush(report, tol);
  mis2.flush(report, tol);
  return report;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

/// u is united with respect to the unit vector w iff u.w == u.u.
inline bool is_united(std::span<const double> u, std::span<const double> w, double tol) {
  if (std::abs(dot(w, w) - 1.0) > tol)
    throw std::invalid_argument("is_united: reference vector is not a unit vector");
  return std::abs(dot(u, w) - dot(u, u)) <= tol;
}

/// Explicit nonnegative coordinates for a family of pairwise orthogonal
/// united vectors and their reference w. Rows 0..k-1 are the u_i, row k
/// is w; all live in dimension k+1.
struct CpFactorization {
  Eigen::MatrixXd rows;

  int k() const noexcept { return static_cast<int>(rows.rows()) - 1; }
  Eigen::MatrixXd gram() const { return rows * rows.transpose(); }
};

inline CpFactorization cp_factor_united(const std::vector<std::vector<double>>& us,
                                        std::span<const double> w, double tol = 1e-9) {
  if (std::abs(dot(w, w) - 1.0) > tol)
    throw std::invalid_argument("cp_factor_united: w is not a unit vector (|w|^2 = " +
                                std::to_string(dot(w, w)) + ")");
  const int k = static_cast<int>(us.size());
  std::vector<double> a(us.size());
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    const double uw = dot(us[i], w);
    const double uu = dot(us[i], us[i]);
    if (std::abs(uw - uu) > tol)
      throw std::invalid_argument("cp_factor_united: u" + std::to_string(i) +
                                  " is not united (u.w - u.u = " + std::to_string(uw - uu) + ")");
    for (int j = 0; j < i; ++j) {
      const double ij = dot(us[i], us[j]);
      if (std::abs(ij) > tol)
        throw std::invalid_argument("cp_factor_united: u" + std::to_string(j) + " and u" +
                                    std::to_string(i) + " are not orthogonal (" +
                                    std::to_string(ij) + ")");
    }
    a[i] = std::max(uw, 0.0);
    total += a[i];
  }
  if (total > 1.0 + tol)
    throw std::invalid_argument("cp_factor_united: sum of u.w is " + std::to_string(total) +
                                " > 1");

  CpFactorization out;
  out.rows = Eigen::MatrixXd::Zero(k + 1, k + 1);
  for (int i = 0; i < k; ++i) {
    out.rows(i, i) = std::sqrt(a[i]);
    out.rows(k, i) = std::sqrt(a[i]);
  }
  out.rows(k, k) = std::sqrt(std::max(0.0, 1.0 - total));
  return out;
}

struct WeightedLift {
  double weight = 0.0;
  PermutationLift lift;
};

struct ConvexCombination {
  std::vector<WeightedLift> terms;

  double weight_sum() const {
    double s = 0.0;
    for (const auto& t : terms) s += t.weight;
    return s;
  }

  /// Sum of weight * lift, in the n^2 or extended (n^2+1) layout.
  Eigen::MatrixXd matrix(bool extended = false) const {
    if (terms.empty()) return {};
    const int n = terms.front().lift.n();
    const int d = n * n + (extended ? 1 : 0);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    for (const auto& t : terms) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
      v.head(n * n) = t.lift.vector();
      if (extended) v[n * n] = 1.0;
      m.noalias() += t.weight * v * v.transpose();
    }
    return m;
  }
};

struct DecompositionResult {
  bool success = false;
  double residual = 0.0;  // max-entry deviation of the recomposition
  ConvexCombination combination;
};

namespace detail {

// Lawson-Hanson active-set NNLS in normal-equation form:
// minimize 0.5 x'Gx - b'x subject to x >= 0.
inline Eigen::VectorXd nnls_gram(const Eigen::MatrixXd& g, const Eigen::VectorXd& b,
                                 int max_outer = 0) {
  const int m = static_cast<int>(b.size());
  if (max_outer <= 0) max_outer = 3 * m + 10;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  std::vector<char> passive(static_cast<std::size_t>(m), 0);
  const double tol = 1e-13 * std::max(1.0, g.diagonal().cwiseAbs().maxCoeff());

  auto solve_passive = [&](Eigen::VectorXd& z) {
    std::vector<int> p;
    for (int i = 0; i < m; ++i)
      if (passive[i]) p.push_back(i);
    z = Eigen::VectorXd::Zero(m);
    if (p.empty()) return;
    Eigen::MatrixXd gp(p.size(), p.size());
    Eigen::VectorXd bp(p.size());
    for (std::size_t r = 0; r < p.size(); ++r) {
      bp[r] = b[p[r]];
      for (std::size_t c = 0; c < p.size(); ++c) gp(r, c) = g(p[r], p[c]);
    }
    const Eigen::VectorXd zp = gp.completeOrthogonalDecomposition().solve(bp);
    for (std::size_t r = 0; r < p.size(); ++r) z[p[r]] = zp[r];
  };

  for (int outer = 0; outer < max_outer; ++outer) {
    const Eigen::VectorXd grad = b - g * x;
    int best = -1;
    double best_val = tol;
    for (int i = 0; i < m; ++i)
      if (!passive[i] && grad[i] > best_val) {
        best_val = grad[i];
        best = i;
      }
    if (best < 0) break;
    passive[best] = 1;

    for (int inner = 0; inner <= m; ++inner) {
      Eigen::VectorXd z;
      solve_passive(z);
      bool ok = true;
      for (int i = 0; i < m; ++i)
        if (passive[i] && z[i] <= 0) ok = false;
      if (ok) {
        x = z;
        break;
      }
      double alpha = 1.0;
      for (int i = 0; i < m; ++i)
        if (passive[i] && z[i] <= 0) alpha = std::min(alpha, x[i] / (x[i] - z[i]));
      x += alpha * (z - x);
      for (int i = 0; i < m; ++i)
        if (passive[i] && x[i] <= 1e-15) {
          passive[i] = 0;
          x[i] = 0.0;
        }
    }
  }
  return x;
}

}  // namespace detail

/// Weights a >= 0 with sum 1 such that sum a_k lift_k is closest to y
/// (squared Frobenius, simplex enforced through a heavily weighted
/// sum row). Succeeds when the max-entry deviation is within tol. y may be
/// n^2- or (n^2+1)-square. Failure is returned, not thrown.
inline DecompositionResult convex_decompose(const Eigen::MatrixXd& y,
                                            const std::vector<PermutationLift>& lifts,
                                            double tol = kDefaultDecomposeTol) {
  if (lifts.empty()) throw std::invalid_argument("convex_decompose: no lifts given");
  const int n = lifts.front().n();
  const bool extended = y.rows() == n * n + 1;
  if (y.rows() != y.cols() || (y.rows() != n * n && !extended))
    throw std::invalid_argument("convex_decompose: matrix size does not match lifts");
  for (const auto& l : lifts)
    if (l.n() != n) throw std::invalid_argument("convex_decompose: lifts of mixed size");

  const int m = static_cast<int>(lifts.size());
  // <L_s, L_t> = (#agreements of s and t)^2 and <L_s, Y> = sum_ik Y(i s(i), k s(k)).
  Eigen::MatrixXd gram(m, m);
  Eigen::VectorXd rhs(m);
  std::vector<std::vector<int>> support(static_cast<std::size_t>(m));
  for (int s = 0; s < m; ++s) {
    for (int i = 0; i < n; ++i) support[s].push_back(i * n + lifts[s].sigma()(i));
    double v = 0.0;
    for (int a : support[s])
      for (int b : support[s]) v += y(a, b);
    rhs[s] = v;
  }
  for (int s = 0; s < m; ++s)
    for (int t = s; t < m; ++t) {
      int agree = 0;
      for (int i = 0; i < n; ++i)
        agree += lifts[s].sigma()(i) == lifts[t].sigma()(i) ? 1 : 0;
      gram(s, t) = gram(t, s) = static_cast<double>(agree) * agree;
    }
  const double penalty = 1e4 * static_cast<double>(n) * n;
  gram.array() += penalty;
  rhs.array() += penalty;

  Eigen::VectorXd a = detail::nnls_gram(gram, rhs);
  const double sum = a.sum();
  DecompositionResult out;
  if (sum <= 0) {
    out.residual = y.cwiseAbs().maxCoeff();
    return out;
  }
  a /= sum;
  for (int s = 0; s < m; ++s)
    if (a[s] > 0) out.combination.terms.push_back({a[s], lifts[s]});
  out.residual = (out.combination.matrix(extended) - y).cwiseAbs().maxCoeff();
  out.success = out.residual <= tol;
  return out;
}

}  // namespace cptheta

#endif  // CPTHETA_LIFT_ALGEBRA_HPP
