#ifndef CPTHETA_TESTS_UNITED_VECTORS_HPP
#define CPTHETA_TESTS_UNITED_VECTORS_HPP

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace cptheta::testing {

inline std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

/// Haar-ish random orthogonal matrix from the QR factor of a Gaussian draw.
inline Eigen::MatrixXd random_orthogonal(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
}

struct UnitedFamily {
  std::vector<std::vector<double>> us;
  std::vector<double> w;
  std::vector<double> a;  // a_i = u_i . w
};

/// k pairwise orthogonal united vectors w.r.t. a unit w, in a randomly
/// rotated frame of dimension dim >= k + 1: u_i = sqrt(a_i) q_i and
/// w = sum_i sqrt(a_i) q_i + sqrt(1 - sum a) q_k. With `maximal` the a_i
/// sum to one.
inline UnitedFamily random_united_family(int k, int dim, bool maximal, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> a(static_cast<std::size_t>(k) + 1);
  double total = 0.0;
  for (auto& x : a) total += (x = expo(rng));
  if (maximal) {
    total -= a.back();
    a.back() = 0.0;
  }
  for (auto& x : a) x /= total;
  const Eigen::MatrixXd q = random_orthogonal(dim, rng);
  UnitedFamily fam;
  Eigen::VectorXd w = std::sqrt(a.back()) * q.col(k);
  for (int i = 0; i < k; ++i) {
    const Eigen::VectorXd u = std::sqrt(a[i]) * q.col(i);
    fam.us.push_back(to_std(u));
    fam.a.push_back(a[i]);
    w += u;
  }
  fam.w = to_std(w);
  return fam;
}

}  // namespace cptheta::testing

#endif  // CPTHETA_TESTS_UNITED_VECTORS_HPP
