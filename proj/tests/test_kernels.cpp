#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "curvequad/kernels.hpp"
#include "curvequad/scenarios.hpp"

using namespace curvequad;

namespace {

Eigen::MatrixXd random_nodes(int dim, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  Eigen::MatrixXd x(dim, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < dim; ++k) x(k, i) = u(rng);
  }
  return x;
}

}  // namespace

TEST(Kernels, MonomialMatrixMatchesDirectPowers) {
  const MonomialBasis b(2, 3);
  const Eigen::MatrixXd x = random_nodes(2, 7, 1);
  const Eigen::MatrixXd A = kernels::serial::monomial_matrix(b, x);
  for (std::size_t j = 0; j < b.size(); ++j) {
    for (int i = 0; i < 7; ++i) {
      EXPECT_NEAR(A(static_cast<Eigen::Index>(j), i), std::pow(x(0, i), b[j][0]) * std::pow(x(1, i), b[j][1]), 1e-14);
    }
  }
}

TEST(Kernels, SerialAndParallelAreBitwiseIdentical) {
  for (int n : {1, 17, 1000, 5000}) {
    const MonomialBasis b(3, 5);
    const Eigen::MatrixXd x = random_nodes(3, n, static_cast<std::uint64_t>(n));
    const Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(n, 0.5, 1.5);
    const Eigen::MatrixXd As = kernels::serial::monomial_matrix(b, x);
    const Eigen::MatrixXd Ao = kernels::omp::monomial_matrix(b, x);
    EXPECT_TRUE(As == Ao) << n;
    EXPECT_TRUE(kernels::serial::accumulate(As, w) == kernels::omp::accumulate(Ao, w)) << n;
    EXPECT_TRUE(kernels::monomial_matrix(b, x) == As) << n;
  }
}

TEST(Kernels, CurveMonomialMatrixSerialMatchesParallel) {
  const auto c = scenarios::inverse_curve();
  const MonomialBasis b(2, 4);
  std::vector<double> t;
  for (int i = 0; i < 3000; ++i) t.push_back(0.5 + i * 1e-3);
  const Eigen::MatrixXd As = kernels::serial::curve_monomial_matrix(b, c, t);
  EXPECT_TRUE(As == kernels::omp::curve_monomial_matrix(b, c, t));
  EXPECT_NEAR(As(1, 0), 2.0, 1e-15);  // x = 1/t at t = 0.5
}
