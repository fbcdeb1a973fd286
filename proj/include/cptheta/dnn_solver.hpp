#ifndef CPTHETA_DNN_SOLVER_HPP
#define CPTHETA_DNN_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "cptheta/sdp_model.hpp"
#include "cptheta/symmetric_eigen.hpp"

namespace cptheta {

struct SolverConfig {
  double tol_primal = 1e-7;
  double tol_dual = 1e-7;
  int max_iter = 50000;
  double step_rho = 1.0;
  double zero_eps = 1e-6;
  std::uint64_t seed = 0;
  double over_relaxation = 1.6;
  int rebalance_every = 20;
  bool oracle_fallback = false;

  void validate() const {
    if (!(tol_primal > 0) || !(tol_dual > 0) || !(zero_eps > 0))
      throw std::invalid_argument("solver config: tolerances must be positive");
    if (max_iter < 1) throw std::invalid_argument("solver config: max_iter must be >= 1");
    if (!(step_rho > 0)) throw std::invalid_argument("solver config: step_rho must be positive");
    if (!(over_relaxation > 0 && over_relaxation < 2))
      throw std::invalid_argument("solver config: over_relaxation must lie in (0,2)");
    if (rebalance_every < 1)
      throw std::invalid_argument("solver config: rebalance_every must be >= 1");
  }
};

enum class SolverStatus { kConverged, kMaxIter, kDiverged };

inline constexpr std::string_view to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::kConverged: return "Converged";
    case SolverStatus::kMaxIter: return "MaxIter";
    case SolverStatus::kDiverged: return "Diverged";
  }
  return "?";
}

inline SolverStatus solver_status_from_string(std::string_view s) {
  for (auto v : {SolverStatus::kConverged, SolverStatus::kMaxIter, SolverStatus::kDiverged})
    if (to_string(v) == s) return v;
  throw std::invalid_argument("unknown solver status '" + std::string(s) + "'");
}

struct SolverResult {
  Eigen::MatrixXd y;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  SolverStatus status = SolverStatus::kMaxIter;
  double final_rho = 0.0;
};

/// Nearest PSD matrix in Frobenius norm: negative eigenvalues clamped to 0.
inline Eigen::MatrixXd project_psd(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("project_psd: matrix not square");
  const int d = static_cast<int>(m.rows());
  if (d == 0) return m;
  const auto eig = symmetric_eigen(m);
  int negative = 0;
  while (negative < d && eig.values[negative] < 0) ++negative;
  const int positive = d - negative;

  Eigen::MatrixXd out;
  if (positive <= negative) {
    const Eigen::MatrixXd b = eig.vectors.rightCols(positive) *
                              eig.values.tail(positive).cwiseSqrt().asDiagonal();
    out = Eigen::MatrixXd::Zero(d, d);
    if (positive > 0) out.selfadjointView<Eigen::Lower>().rankUpdate(b);
  } else {
    const Eigen::MatrixXd b = eig.vectors.leftCols(negative) *
                              (-eig.values.head(negative)).cwiseSqrt().asDiagonal();
    out = m.selfadjointView<Eigen::Lower>();
    out.triangularView<Eigen::StrictlyUpper>().setZero();
    if (negative > 0) out.selfadjointView<Eigen::Lower>().rankUpdate(b);
  }
  out.triangularView<Eigen::StrictlyUpper>() = out.transpose();
  return out;
}

/// How a diag-link row Y(ij,w) = Y(ij,ij) spreads its correction.
enum class AffineMetric {
  /// (ij,w) and (ij,ij) are two free coordinates; both become their mean.
  kPair,
  /// Full Frobenius metric: (ij,w), (w,ij), (ij,ij) all become their mean.
  kFrobenius,
};

/// Closest point satisfying every equality row of p. The rows touch
/// disjoint coordinate groups, so the projection is a per-group
/// assignment: zero rows set 0, the omega row sets 1, diag-link rows
/// average their coordinates. The result is symmetric.
inline Eigen::MatrixXd project_affine(const Eigen::MatrixXd& m, const Program& p,
                                      AffineMetric metric = AffineMetric::kPair) {
  if (m.rows() != p.dim() || m.cols() != p.dim())
    throw std::invalid_argument("project_affine: dimension mismatch");
  Eigen::MatrixXd out = 0.5 * (m + m.transpose());
  const int w = p.index().omega();
  for (const auto& c : p.constraints()) {
    switch (c.kind) {
      case ConstraintKind::kOmegaNorm:
        out(w, w) = c.rhs;
        break;
      case ConstraintKind::kDiagLink: {
        const int a = c.entries.front().row;
        const double x = metric == AffineMetric::kPair
                             ? 0.5 * (out(a, w) + out(a, a))
                             : (2.0 * out(a, w) + out(a, a)) / 3.0;
        out(a, w) = out(w, a) = out(a, a) = x;
        break;
      }
      default:
        for (const auto& e : c.entries) out(e.row, e.col) = 0.0;
        break;
    }
  }
  return out;
}

namespace detail {

// Entries allowed to be positive (1) vs pinned by a zero row (0) on the
// pair block; the omega row and column are handled separately.
inline Eigen::MatrixXd free_mask(const Program& p) {
  const int d = p.dim();
  Eigen::MatrixXd mask = Eigen::MatrixXd::Ones(d, d);
  mask.row(d - 1).setZero();
  mask.col(d - 1).setZero();
  for (const auto& c : p.constraints()) {
    if (c.kind == ConstraintKind::kOmegaNorm || c.kind == ConstraintKind::kDiagLink) continue;
    for (const auto& e : c.entries) mask(e.row, e.col) = 0.0;
  }
  return mask;
}

// Projection onto {affine rows} ∩ {Y >= 0} in the Frobenius metric.
inline void project_affine_nonneg(const Eigen::MatrixXd& v, const Eigen::MatrixXd& mask,
                                  int pairs, Eigen::MatrixXd& out) {
  const int w = pairs;
  out = v.cwiseMax(0.0).cwiseProduct(mask);
  for (int a = 0; a < pairs; ++a) {
    const double x = std::max(0.0, (v(a, w) + v(w, a) + v(a, a)) / 3.0);
    out(a, w) = out(w, a) = out(a, a) = x;
  }
  out(w, w) = 1.0;
}

}  // namespace detail

/// Maximizes <C,Y> over affine ∩ PSD ∩ nonnegative with over-relaxed
/// ADMM on the splitting X (affine ∩ nonnegative, carries the linear
/// objective) = Z (PSD). Residual balancing rescales rho by 2.
///
/// The returned Y is the affine/nonnegative iterate X, so pattern and sign
/// conditions hold exactly and the PSD defect is bounded by the primal
/// residual. Residuals are relative:
///   primal = |X - Z|_F / (1 + max(|X|_F, |Z|_F))
///   dual   = rho |Z - Z_prev|_F / (1 + rho |U|_F)
/// and convergence additionally needs <C,X> and <C,Z> to agree within
/// tol_primal, which keeps the reported objective from overshooting n.
inline SolverResult solve(const Program& p, const SolverConfig& cfg = {}) {
  cfg.validate();
  const int n = p.n();
  const int d = p.dim();
  const int pairs = n * n;
  const int w = pairs;
  const double ceiling = static_cast<double>(n);
  const Eigen::MatrixXd mask = detail::free_mask(p);

  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(d, d);
  z(w, w) = 1.0;
  for (int a = 0; a < pairs; ++a) z(a, a) = z(a, w) = z(w, a) = 1.0 / n;
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd x(d, d), v(d, d), z_prev(d, d);

  double rho = cfg.step_rho;
  const double alpha = cfg.over_relaxation;
  double best = std::numeric_limits<double>::infinity();

  SolverResult res;
  res.status = SolverStatus::kMaxIter;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    v = z - u;
    v.diagonal().head(pairs).array() += 1.0 / rho;
    detail::project_affine_nonneg(v, mask, pairs, x);

    z_prev = z;
    v = alpha * x + (1.0 - alpha) * z_prev + u;
    z = project_psd(v);
    u = v - z;

    const double scale = 1.0 + std::max(x.norm(), z.norm());
    const double primal = (x - z).norm() / scale;
    const double dual = rho * (z - z_prev).norm() / (1.0 + rho * u.norm());
    const double objective = x.diagonal().head(pairs).sum();
    const double split_gap = std::abs(objective - z.diagonal().head(pairs).sum());

    res.iterations = it;
    res.primal_residual = primal;
    res.dual_residual = dual;
    res.objective = objective;

    if (!std::isfinite(primal) || !std::isfinite(dual)) {
      res.status = SolverStatus::kDiverged;
      break;
    }
    const double worst = std::max(primal, dual);
    best = std::min(best, worst);
    if (best > 0 && worst > 1e6 * best) {
      res.status = SolverStatus::kDiverged;
      break;
    }
    if (primal <= cfg.tol_primal && split_gap <= cfg.tol_primal &&
        (dual <= cfg.tol_dual || objective >= ceiling - 1e-8)) {
      res.status = SolverStatus::kConverged;
      break;
    }
    if (it % cfg.rebalance_every == 0) {
      if (primal > 10.0 * dual) {
        rho *= 2.0;
        u /= 2.0;
      } else if (dual > 10.0 * primal) {
        rho /= 2.0;
        u *= 2.0;
      }
    }
  }
  res.final_rho = rho;
  res.y = 0.5 * (x + x.transpose());
  res.objective = objective_value(res.y, p);
  return res;
}

}  // namespace cptheta

#endif  // CPTHETA_DNN_SOLVER_HPP
