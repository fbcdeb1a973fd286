#include <gtest/gtest.h>

#include <random>

#include "cptheta/dnn_solver.hpp"
#include "cptheta/lift_algebra.hpp"
#include "fixtures.hpp"

namespace cptheta {
namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

Eigen::MatrixXd random_symmetric(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = g(rng);
  return a;
}

TEST(ProjectPsd, Examples) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 0, 0, -1;
  Eigen::MatrixXd want(2, 2);
  want << 1, 0, 0, 0;
  EXPECT_LT(max_abs(project_psd(m) - want), 1e-14);

  m << 0, 1, 1, 0;
  want << 0.5, 0.5, 0.5, 0.5;
  EXPECT_LT(max_abs(project_psd(m) - want), 1e-14);

  const Eigen::MatrixXd psd = lift(Permutation({1, 0})).extended();
  EXPECT_LT(max_abs(project_psd(psd) - psd), 1e-12);
  EXPECT_EQ(project_psd(Eigen::MatrixXd::Zero(3, 3)), Eigen::MatrixXd::Zero(3, 3));
  EXPECT_THROW(project_psd(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
}

TEST(ProjectPsd, ContractsAgainstReference) {
  std::mt19937_64 rng(5);
  for (int d : {1, 3, 10, 26}) {
    const Eigen::MatrixXd a = random_symmetric(d, rng);
    const Eigen::MatrixXd p = project_psd(a);
    // Reference: clamp eigenvalues from Eigen's own solver.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a);
    const Eigen::MatrixXd want = ref.eigenvectors() *
                                 ref.eigenvalues().cwiseMax(0.0).asDiagonal() *
                                 ref.eigenvectors().transpose();
    EXPECT_LT(max_abs(p - want), 1e-10) << d;
    EXPECT_EQ(p, p.transpose());
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(p).eigenvalues().minCoeff(), -1e-10);
    EXPECT_LT(max_abs(project_psd(p) - p), 1e-10) << d;
  }
}

TEST(ProjectAffine, Examples) {
  const Program p = build_program(testing::complete(2), testing::complete(2));
  const Eigen::MatrixXd lifted = lift(Permutation::identity(2)).extended();
  EXPECT_LT(max_abs(project_affine(lifted, p) - lifted), 1e-15);

  Eigen::MatrixXd m = lifted;
  m(4, 4) = 3.0;
  EXPECT_EQ(project_affine(m, p)(4, 4), 1.0);

  m = lifted;
  m(0, 4) = m(4, 0) = 0.2;
  m(0, 0) = 0.4;
  const Eigen::MatrixXd q = project_affine(m, p);
  EXPECT_NEAR(q(0, 4), 0.3, 1e-15);
  EXPECT_NEAR(q(4, 0), 0.3, 1e-15);
  EXPECT_NEAR(q(0, 0), 0.3, 1e-15);

  const Eigen::MatrixXd f = project_affine(m, p, AffineMetric::kFrobenius);
  EXPECT_NEAR(f(0, 0), 0.8 / 3.0, 1e-15);
  EXPECT_THROW(project_affine(Eigen::MatrixXd::Zero(4, 4), p), std::invalid_argument);
}

TEST(ProjectAffine, IdempotentAndSatisfiesRows) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 1 + trial % 4;
    const Program p =
        build_program(testing::random_graph(n, 0.5, rng), testing::random_graph(n, 0.5, rng));
    const Eigen::MatrixXd m = random_symmetric(p.dim(), rng);
    for (auto metric : {AffineMetric::kPair, AffineMetric::kFrobenius}) {
      const Eigen::MatrixXd q = project_affine(m, p, metric);
      EXPECT_LT(max_abs(project_affine(q, p, metric) - q), 1e-10);
      for (const auto& c : p.constraints()) EXPECT_NEAR(c.evaluate(q), c.rhs, 1e-10);
    }
  }
}

TEST(ProjectAffine, FrobeniusVariantIsOrthogonal) {
  // The residual m - P(m) must be orthogonal to every feasible direction
  // q1 - q2 with q1, q2 in the affine set.
  std::mt19937_64 rng(10);
  const Program p = build_program(testing::path(3), testing::star(3));
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXd m = random_symmetric(p.dim(), rng);
    const Eigen::MatrixXd q = project_affine(m, p, AffineMetric::kFrobenius);
    const Eigen::MatrixXd q1 = project_affine(random_symmetric(p.dim(), rng), p,
                                              AffineMetric::kFrobenius);
    const Eigen::MatrixXd q2 = project_affine(random_symmetric(p.dim(), rng), p,
                                              AffineMetric::kFrobenius);
    EXPECT_NEAR(((m - q).array() * (q1 - q2).array()).sum(), 0.0, 1e-10);
  }
}

SolverResult solve_pair(const Graph& g1, const Graph& g2, SolverConfig cfg = {}) {
  return solve(build_program(g1, g2), cfg);
}

void expect_feasible(const SolverResult& r, const Graph& g1, const Graph& g2) {
  const auto report = check_feasible(r.y, g1, g2, 10 * SolverConfig{}.tol_primal);
  EXPECT_TRUE(report.feasible()) << "worst violation " << report.worst();
}

TEST(Solve, FourCycleReachesN) {
  const Graph g = testing::cycle(4);
  const auto r = solve_pair(g, g);
  ASSERT_EQ(r.status, SolverStatus::kConverged);
  EXPECT_NEAR(r.objective, 4.0, 1e-5);
  expect_feasible(r, g, g);
}

TEST(Solve, SingleVertex) {
  const auto r = solve_pair(testing::empty(1), testing::empty(1));
  ASSERT_EQ(r.status, SolverStatus::kConverged);
  EXPECT_NEAR(r.objective, 1.0, 1e-6);
}

TEST(Solve, EdgeAgainstNonEdgeIsOne) {
  // Both mismatched cross entries are zero, leaving two decoupled 2x2
  // blocks [a, 0; 0, b] with a + b = 1 per row and column, so the
  // diagonal sum is exactly the value of one matching.
  const auto r = solve_pair(testing::complete(2), testing::empty(2));
  ASSERT_EQ(r.status, SolverStatus::kConverged);
  EXPECT_NEAR(r.objective, 1.0, 1e-5);
  expect_feasible(r, testing::complete(2), testing::empty(2));
}

TEST(Solve, IsomorphicPairsReachN) {
  std::mt19937_64 rng(31);
  for (const Graph& g : {testing::path(5), testing::cycle(6), testing::star(5)}) {
    const Graph h = testing::relabel(g, testing::random_permutation(g.n(), rng));
    const auto r = solve_pair(g, h);
    ASSERT_EQ(r.status, SolverStatus::kConverged);
    EXPECT_NEAR(r.objective, g.n(), 1e-5);
    expect_feasible(r, g, h);
  }
}

TEST(Solve, NeverExceedsCeiling) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + trial % 4;
    const Graph g1 = testing::random_graph(n, 0.5, rng);
    const Graph g2 = testing::random_graph(n, 0.5, rng);
    const auto r = solve_pair(g1, g2);
    ASSERT_EQ(r.status, SolverStatus::kConverged) << trial;
    EXPECT_LE(r.objective, n + 1e-6) << trial;
    EXPECT_GE(r.objective, 1.0 - 1e-6) << trial;
    expect_feasible(r, g1, g2);
  }
}

TEST(Solve, DeterministicAcrossRunsAndSeeds) {
  const Graph g1 = testing::cycle(6);
  const Graph g2 = testing::disjoint_union(testing::cycle(3), testing::cycle(3));
  SolverConfig a, b;
  b.seed = 1234;
  const auto r1 = solve_pair(g1, g2, a);
  const auto r2 = solve_pair(g1, g2, a);
  const auto r3 = solve_pair(g1, g2, b);
  EXPECT_EQ(r1.y, r2.y);
  EXPECT_EQ(r1.iterations, r2.iterations);
  EXPECT_EQ(r1.y, r3.y);
}

TEST(Solve, IterationCapReportsMaxIter) {
  SolverConfig cfg;
  cfg.max_iter = 3;
  const auto r = solve_pair(testing::petersen(), testing::petersen(), cfg);
  EXPECT_EQ(r.status, SolverStatus::kMaxIter);
  EXPECT_EQ(r.iterations, 3);
}

TEST(SolverConfig, Validation) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  c.tol_primal = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.max_iter = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.over_relaxation = 2.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.zero_eps = -1;
  EXPECT_THROW(solve(build_program(testing::empty(1), testing::empty(1)), c),
               std::invalid_argument);
  EXPECT_EQ(solver_status_from_string("Diverged"), SolverStatus::kDiverged);
  EXPECT_THROW(solver_status_from_string("done"), std::invalid_argument);
}

}  // namespace
}  // namespace cptheta
