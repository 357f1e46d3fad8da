#include <gtest/gtest.h>

#include <cmath>

#include "curvequad/error.hpp"
#include "curvequad/gauss.hpp"
#include "curvequad/scenarios.hpp"
#include "curvequad/verify.hpp"

using namespace curvequad;

TEST(Recurrence, LegendreCoefficients) {
  const auto rec = recurrence_from_moments(line_moments(MeasureSpec::uniform(-1.0, 1.0), 3), 2);
  ASSERT_EQ(rec.length(), 2);
  EXPECT_NEAR(rec.a[0], 0.0, 1e-15);
  EXPECT_NEAR(rec.a[1], 0.0, 1e-15);
  EXPECT_NEAR(rec.b[0], 2.0, 1e-15);
  EXPECT_NEAR(rec.b[1], 1.0 / 3.0, 1e-15);
}

TEST(Recurrence, SingleAtomIsDegenerate) {
  const auto m = line_moments(MeasureSpec::from_parameter_atoms({0.7}, {2.0}), 3);
  try {
    recurrence_from_moments(m, 2);
    FAIL() << "expected DegenerateMeasure";
  } catch (const DegenerateMeasure& e) {
    EXPECT_EQ(e.depth(), 1);
  }
}

TEST(Recurrence, SymmetricMeasureHasZeroDiagonal) {
  const auto rec = recurrence_from_moments(line_moments(MeasureSpec::gaussian(0.0, 1.0, -3.0, 3.0), 11), 6);
  for (double a : rec.a) EXPECT_NEAR(a, 0.0, 1e-12);
}

TEST(Recurrence, ReproducesItsMoments) {
  const auto m = line_moments(MeasureSpec::uniform(0.0, 1.0), 9);
  const auto back = recurrence_from_moments(m, 5).moments();
  for (int k = 0; k <= 9; ++k) EXPECT_NEAR(back[static_cast<std::size_t>(k)], m[k], 1e-12);
}

TEST(GaussRule, UniformStrengthThree) {
  const auto r = gauss_rule(line_moments(MeasureSpec::uniform(-1.0, 1.0), 3), 3);
  ASSERT_EQ(r.size(), 2);
  EXPECT_NEAR(r.nodes(0, 0), -1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r.nodes(0, 1), 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r.weights[0], 1.0, 1e-14);
  EXPECT_NEAR(r.weights[1], 1.0, 1e-14);
}

TEST(GaussRule, StrengthOneIsTheCentroid) {
  const auto m = line_moments(scenarios::random_line_atoms(3, 6), 1);
  const auto r = gauss_rule(m, 1);
  ASSERT_EQ(r.size(), 1);
  EXPECT_NEAR(r.nodes(0, 0), m[1] / m[0], 1e-14);
  EXPECT_NEAR(r.weights[0], m[0], 1e-14);
}

TEST(GaussRule, RecoversThreeAtoms) {
  const std::vector<double> t{-0.6, 0.1, 0.9}, w{0.5, 1.25, 0.8};
  const auto r = gauss_rule(line_moments(MeasureSpec::from_parameter_atoms(t, w), 5), 5);
  ASSERT_EQ(r.size(), 3);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(r.nodes(0, i), t[static_cast<std::size_t>(i)], 1e-10);
    EXPECT_NEAR(r.weights[i], w[static_cast<std::size_t>(i)], 1e-10);
  }
}

TEST(GaussRule, DegenerateMeasureReturnsItsAtoms) {
  const auto m = line_moments(MeasureSpec::from_parameter_atoms({-0.5, 0.5}, {1.0, 2.0}), 9);
  const auto r = gauss_rule(m, 9);
  EXPECT_EQ(r.size(), 2);
  EXPECT_LE(check_exactness(r, m, 9).max_residual, 1e-10);
  GaussOptions strict;
  strict.recover_degenerate = false;
  EXPECT_THROW(gauss_rule(m, 9, strict), DegenerateMeasure);
}

TEST(GaussRule, EvenStrengthUsesNextOddRule) {
  const auto m = line_moments(MeasureSpec::uniform(-1.0, 1.0), 7);
  const auto r = gauss_rule(m, 6);
  EXPECT_EQ(r.size(), 4);
  EXPECT_LE(check_exactness(r, m, 7).max_residual, 1e-13);
}

TEST(GaussRule, ShiftedIntervalHighStrength) {
  const auto m = line_moments(MeasureSpec::uniform(0.0, 1.0), 21);
  const auto r = gauss_rule(m, 21);
  EXPECT_EQ(r.size(), 11);
  EXPECT_LE(check_exactness(r, m, 21).max_residual, 1e-9);
  for (int i = 0; i < r.size(); ++i) EXPECT_GT(r.weights[i], 0.0);
}

TEST(MinimalNodes, Values) {
  EXPECT_EQ(minimal_nodes(5), 3);
  EXPECT_EQ(minimal_nodes(0), 1);
  EXPECT_EQ(minimal_nodes(6), 4);
}
