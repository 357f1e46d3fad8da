#include <gtest/gtest.h>

#include "curvequad/error.hpp"
#include "curvequad/integrate.hpp"
#include "curvequad/moments.hpp"
#include "curvequad/scenarios.hpp"

using namespace curvequad;

TEST(CurveMoments, SingleAtomEvaluates) {
  const auto nu = MeasureSpec::from_parameter_atoms({0.0}, {1.0});
  const auto m = curve_moments(nu, RationalCurve::monomial({1, 2}), 2);
  EXPECT_EQ(m[MultiIndex({0, 0})], 1.0);
  EXPECT_EQ(m[MultiIndex({1, 0})], 0.0);
  EXPECT_EQ(m[MultiIndex({0, 1})], 0.0);
  EXPECT_EQ(m[MultiIndex({2, 0})], 0.0);
}

TEST(CurveMoments, UniformOnTheLine) {
  const auto m = curve_moments(MeasureSpec::uniform(-1.0, 1.0), RationalCurve::monomial({1}), 8);
  for (int k = 0; k <= 8; ++k) EXPECT_NEAR(m[k], k % 2 ? 0.0 : 2.0 / (k + 1), 1e-12) << k;
}

TEST(CurveMoments, RationalCurveDensity) {
  // (1/t, t) under uniform [1, 2]: m_(1,0) = ln 2, m_(1,1) = 1.
  const auto m = curve_moments(MeasureSpec::uniform(1.0, 2.0), scenarios::inverse_curve(), 2);
  EXPECT_NEAR(m[MultiIndex({1, 0})], std::log(2.0), 1e-12);
  EXPECT_NEAR(m[MultiIndex({1, 1})], 1.0, 1e-12);
  EXPECT_NEAR(m[MultiIndex({2, 0})], 0.5, 1e-12);
}

TEST(CurveMoments, PoleInSupportRaises) {
  try {
    curve_moments(MeasureSpec::uniform(-1.0, 1.0), scenarios::inverse_curve(), 2);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PoleInSupport);
  }
}

TEST(CurveMoments, RawParameterMomentsPushForward) {
  const auto line = line_moments(MeasureSpec::uniform(0.0, 1.0), 9);
  const auto curve = scenarios::twisted_cubic();
  const auto direct = curve_moments(MeasureSpec::uniform(0.0, 1.0), curve, 3);
  const auto pushed = curve_moments(MeasureSpec::from_moments(line), curve, 3);
  for (std::size_t i = 0; i < direct.size(); ++i) EXPECT_NEAR(direct.values()[i], pushed.values()[i], 1e-12);
}

TEST(MomentMatrix, Identity) {
  const auto M = moment_matrix(MomentVector::univariate({1.0, 0.0, 1.0}), 1);
  EXPECT_EQ(M.entries, Eigen::Matrix2d::Identity());
}

TEST(MomentMatrix, SingleAtomRankOne) {
  const auto m = line_moments(MeasureSpec::from_parameter_atoms({2.0}, {3.0}), 2);
  const auto M = moment_matrix(m, 1);
  Eigen::Matrix2d want;
  want << 3, 6, 6, 12;
  EXPECT_EQ(M.entries, want);
  const auto d = degeneracy_test(M);
  EXPECT_EQ(d.rank, 1);
  ASSERT_EQ(d.kernel.size(), 1u);
  const double two[] = {2.0};
  EXPECT_NEAR(d.kernel[0](two), 0.0, 1e-12);
}

TEST(MomentMatrix, UniformDegreeTwo) {
  const auto M = moment_matrix(line_moments(MeasureSpec::uniform(-1.0, 1.0), 4), 2);
  Eigen::Matrix3d want;
  want << 2, 0, 2.0 / 3, 0, 2.0 / 3, 0, 2.0 / 3, 0, 0.4;
  EXPECT_LT((M.entries - want).cwiseAbs().maxCoeff(), 1e-14);
  const auto d = degeneracy_test(M);
  EXPECT_EQ(d.rank, 3);
  EXPECT_TRUE(d.kernel.empty());
  EXPECT_GT(psd_margin(M), 0.0);
}

TEST(MomentMatrix, ZeroMatrixHasFullKernel) {
  const auto d = degeneracy_test(moment_matrix(MomentVector(1, 4), 2));
  EXPECT_EQ(d.rank, 0);
  EXPECT_EQ(d.kernel.size(), 3u);
}

TEST(MomentMatrix, InsufficientDegreeRaises) {
  try {
    moment_matrix(MomentVector(2, 3), 2);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientDegree);
  }
}

TEST(MomentMatrix, RankBoundedByAtomCount) {
  const auto mu = scenarios::random_parabola_atoms(7, 4);
  const auto m = ambient_moments(mu, 2, 6);
  EXPECT_LE(degeneracy_test(moment_matrix(m, 3)).rank, 4);
}

TEST(Integrate, GaussLegendreExactness) {
  Eigen::VectorXd x, w;
  gauss_legendre(5, x, w);
  EXPECT_NEAR(w.sum(), 2.0, 1e-15);
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += w[i] * std::pow(x[i], 8);
  EXPECT_NEAR(s, 2.0 / 9.0, 1e-15);
}

TEST(Integrate, AdaptiveHandlesPeakedIntegrand) {
  const auto v = integrate_adaptive([](double t, Eigen::Ref<Eigen::VectorXd> out) { out[0] = 1.0 / (1e-3 + t * t); }, 1, -1.0,
                                    1.0);
  EXPECT_NEAR(v[0], 2.0 * std::atan(1.0 / std::sqrt(1e-3)) / std::sqrt(1e-3), 1e-9);
}
