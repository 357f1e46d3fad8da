#include <gtest/gtest.h>

#include <cmath>

#include "curvequad/gauss.hpp"
#include "curvequad/scenarios.hpp"
#include "curvequad/synthesis.hpp"
#include "curvequad/verify.hpp"

using namespace curvequad;

TEST(Exactness, GaussRuleAgainstItsMeasure) {
  const auto m = line_moments(MeasureSpec::gaussian(0.0, 1.0, -4.0, 4.0), 9);
  EXPECT_LE(check_exactness(gauss_rule(m, 9), m, 9).max_residual, 1e-10);
}

TEST(Exactness, PerturbedWeightShowsOnTheMassRow) {
  const auto m = line_moments(MeasureSpec::uniform(-1.0, 1.0), 3);
  auto r = gauss_rule(m, 3);
  r.weights[0] += 1e-3;
  const auto rep = check_exactness(r, m, 3);
  EXPECT_NEAR(rep.per_degree[0], 1e-3 / 2.0, 1e-12);
  // The degree-one row moves by 1e-3 times the node, which is the larger change.
  EXPECT_NEAR(rep.max_residual, 1e-3 / std::sqrt(3.0), 1e-12);
}

TEST(Exactness, EmptyRuleAgainstZeroMeasure) {
  QuadratureRule r;
  r.nodes.resize(2, 0);
  EXPECT_EQ(check_exactness(r, MomentVector(2, 3), 3).max_residual, 0.0);
}

TEST(CheckBounds, PullbackMeetsTheLowerBound) {
  const auto nu = MeasureSpec::uniform(0.0, 1.0);
  const auto c = scenarios::twisted_cubic();
  const auto res = pullback_gauss(c, nu, 3);
  const auto b = check_bounds(res.rule, c, 3, lower_bound_context(c, nu, 3));
  EXPECT_EQ(b.achieved, 5);
  ASSERT_FALSE(b.lower.empty());
  EXPECT_EQ(b.lower[0].bound.value, 5);
  EXPECT_FALSE(b.lower[0].bound.advisory);
  EXPECT_TRUE(b.lower[0].satisfied);
}

TEST(CheckBounds, DuplicatedNodesAreMergedBeforeCounting) {
  const auto nu = MeasureSpec::uniform(0.0, 1.0);
  const auto c = scenarios::twisted_cubic();
  auto r = pullback_gauss(c, nu, 3).rule;
  const int n = r.size();
  r.nodes.conservativeResize(Eigen::NoChange, n + 1);
  r.nodes.col(n) = r.nodes.col(0);
  r.weights.conservativeResize(n + 1);
  r.weights[0] *= 0.5;
  r.weights[n] = r.weights[0];
  r.parameter_values.push_back(r.parameter_values[0]);
  EXPECT_EQ(check_bounds(r, c, 3).achieved, n);
}

TEST(VerifyRule, PassAndCorruptedFail) {
  const auto nu = MeasureSpec::uniform(0.0, 1.0);
  const auto c = scenarios::twisted_cubic();
  auto r = pullback_gauss(c, nu, 3).rule;
  EXPECT_TRUE(verify_rule(r, c, nu, 3).pass);
  r.weights[2] *= 1.01;
  const auto v = verify_rule(r, c, nu, 3);
  EXPECT_FALSE(v.pass);
  EXPECT_FALSE(v.reasons.empty());
}

TEST(Degeneracy, DiscreteMeasureAgreement) {
  const auto c = scenarios::twisted_cubic();
  // Four atoms: nondegenerate at k = 1 (four parameter monomials), degenerate beyond.
  const auto nu = MeasureSpec::from_parameter_atoms({-0.5, 0.2, 0.7, 0.9}, {1.0, 1.0, 1.0, 0.5});
  for (int k = 1; k <= 3; ++k) {
    const auto d = degeneracy_transfer(c, nu, k);
    EXPECT_TRUE(d.agree) << k;
    EXPECT_LE(d.rank_curve, 4);
    EXPECT_EQ(d.rank_curve, d.rank_line);
  }
  EXPECT_FALSE(degeneracy_transfer(c, nu, 1).line_degenerate);
  EXPECT_FALSE(degeneracy_transfer(c, nu, 1).curve_degenerate);
  EXPECT_TRUE(degeneracy_transfer(c, nu, 2).line_degenerate);
  EXPECT_TRUE(degeneracy_transfer(c, nu, 2).curve_degenerate);
}
