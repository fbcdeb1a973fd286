#ifndef CPTHETA_SDP_MODEL_HPP
#define CPTHETA_SDP_MODEL_HPP

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cptheta/graph.hpp"

namespace cptheta {

enum class ConstraintKind {
  kOmegaNorm,      // Y(w,w) = 1
  kDiagLink,       // Y(ij,w) = Y(ij,ij)
  kRowOrth,        // Y(ij,ik) = 0, j != k
  kColOrth,        // Y(ji,ki) = 0, j != k
  kEdgeMismatch1,  // Y(ij,kl) = 0, ik in E1, jl not in E2
  kEdgeMismatch2,  // Y(ij,kl) = 0, ik not in E1, jl in E2
};

inline constexpr std::string_view to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::kOmegaNorm: return "omega-norm";
    case ConstraintKind::kDiagLink: return "diag-link";
    case ConstraintKind::kRowOrth: return "row-orth";
    case ConstraintKind::kColOrth: return "col-orth";
    case ConstraintKind::kEdgeMismatch1: return "edge-mismatch-1";
    case ConstraintKind::kEdgeMismatch2: return "edge-mismatch-2";
  }
  return "?";
}

inline ConstraintKind constraint_kind_from_string(std::string_view s) {
  for (auto k : {ConstraintKind::kOmegaNorm, ConstraintKind::kDiagLink, ConstraintKind::kRowOrth,
                 ConstraintKind::kColOrth, ConstraintKind::kEdgeMismatch1,
                 ConstraintKind::kEdgeMismatch2})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown constraint kind '" + std::string(s) + "'");
}

struct MatrixEntry {
  int row = 0;
  int col = 0;
  double value = 0.0;

  friend bool operator==(const MatrixEntry&, const MatrixEntry&) = default;
};

/// <A, Y> = rhs, with A stored as its nonzero entries (both triangles).
struct Constraint {
  ConstraintKind kind{};
  std::vector<MatrixEntry> entries;
  double rhs = 0.0;

  double evaluate(const Eigen::MatrixXd& y) const {
    double s = 0.0;
    for (const auto& e : entries) s += e.value * y(e.row, e.col);
    return s;
  }

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// The program for one graph pair: maximize <C,Y> over the affine rows
/// below, intersected with the PSD cone and the nonnegative orthant (the
/// cone memberships are left to the solver).
class Program {
 public:
  Program() = default;
  Program(VertexPairIndex index, std::vector<MatrixEntry> objective,
          std::vector<Constraint> constraints)
      : index_(index), objective_(std::move(objective)), constraints_(std::move(constraints)) {}

  int n() const noexcept { return index_.n(); }
  int dim() const noexcept { return index_.dim(); }
  const VertexPairIndex& index() const noexcept { return index_; }
  const std::vector<MatrixEntry>& objective() const noexcept { return objective_; }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }

  std::size_t count(ConstraintKind kind) const {
    return static_cast<std::size_t>(std::count_if(
        constraints_.begin(), constraints_.end(),
        [&](const Constraint& c) { return c.kind == kind; }));
  }

  Eigen::MatrixXd objective_matrix() const {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(dim(), dim());
    for (const auto& e : objective_) c(e.row, e.col) += e.value;
    return c;
  }

  /// Symmetric 0/1 table over the n^2 pair indices marking entries forced
  /// to zero by the row, column and edge-mismatch rows.
  std::vector<std::vector<char>> zero_pattern() const {
    const int p = index_.pair_count();
    std::vector<std::vector<char>> z(p, std::vector<char>(p, 0));
    for (const auto& c : constraints_) {
      if (c.kind == ConstraintKind::kOmegaNorm || c.kind == ConstraintKind::kDiagLink) continue;
      for (const auto& e : c.entries) z[e.row][e.col] = 1;
    }
    return z;
  }

  friend bool operator==(const Program& a, const Program& b) {
    return a.index_.n() == b.index_.n() && a.objective_ == b.objective_ &&
           a.constraints_ == b.constraints_;
  }

 private:
  VertexPairIndex index_;
  std::vector<MatrixEntry> objective_;
  std::vector<Constraint> constraints_;
};

namespace detail {

inline Constraint zero_constraint(ConstraintKind kind, int a, int b) {
  return {kind, {{a, b, 0.5}, {b, a, 0.5}}, 0.0};
}

}  // namespace detail

/// Compiles a graph pair into its program. Each zeroed entry appears once:
/// a pair sharing a row or column is tagged row-orth/col-orth; the
/// edge-mismatch rows only cover pairs with i != k and j != l.
inline Program build_program(const Graph& g1, const Graph& g2) {
  if (g1.n() != g2.n()) throw std::invalid_argument("build_program: size mismatch");
  const int n = g1.n();
  if (n < 1) throw std::invalid_argument("build_program: empty graphs");
  const VertexPairIndex idx(n);
  const int w = idx.omega();

  std::vector<MatrixEntry> objective;
  for (int a = 0; a < n * n; ++a) objective.push_back({a, a, 1.0});

  std::vector<Constraint> rows;
  rows.push_back({ConstraintKind::kOmegaNorm, {{w, w, 1.0}}, 1.0});
  for (int a = 0; a < n * n; ++a)
    rows.push_back({ConstraintKind::kDiagLink, {{a, w, 0.5}, {w, a, 0.5}, {a, a, -1.0}}, 0.0});

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        rows.push_back(detail::zero_constraint(ConstraintKind::kRowOrth, idx.flat(i, j),
                                               idx.flat(i, k)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        rows.push_back(detail::zero_constraint(ConstraintKind::kColOrth, idx.flat(j, i),
                                               idx.flat(k, i)));

  for (int a = 0; a < n * n; ++a) {
    const auto [i, j] = idx.pair(a);
    for (int b = a + 1; b < n * n; ++b) {
      const auto [k, l] = idx.pair(b);
      if (i == k || j == l) continue;
      const bool e1 = g1.adjacent(i, k);
      const bool e2 = g2.adjacent(j, l);
      if (e1 && !e2) rows.push_back(detail::zero_constraint(ConstraintKind::kEdgeMismatch1, a, b));
      if (!e1 && e2) rows.push_back(detail::zero_constraint(ConstraintKind::kEdgeMismatch2, a, b));
    }
  }
  return Program(idx, std::move(objective), std::move(rows));
}

/// <C,Y> = sum of the n^2 pair-diagonal entries.
inline double objective_value(const Eigen::MatrixXd& y, const Program& p) {
  if (y.rows() != p.dim() || y.cols() != p.dim())
    throw std::invalid_argument("objective_value: dimension mismatch");
  double s = 0.0;
  for (const auto& e : p.objective()) s += e.value * y(e.row, e.col);
  return s;
}

}  // namespace cptheta

#endif  // CPTHETA_SDP_MODEL_HPP
