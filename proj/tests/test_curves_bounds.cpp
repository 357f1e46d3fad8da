#include <gtest/gtest.h>

#include <random>

#include "curvequad/bounds.hpp"
#include "curvequad/curves.hpp"
#include "curvequad/error.hpp"
#include "curvequad/scenarios.hpp"

using namespace curvequad;

namespace {

PlaneCurve plane(std::initializer_list<std::tuple<int, int, double>> terms) {
  PlaneCurve c;
  for (const auto& [a, b, v] : terms) c.F.add_term(MultiIndex({a, b}), v);
  return c;
}

}  // namespace

TEST(PsiMatrix, IdentityParametrization) {
  EXPECT_EQ(psi_matrix(RationalCurve::monomial({1}), 2), Eigen::Matrix3d::Identity());
}

TEST(PsiMatrix, MonomialColumns) {
  const Eigen::MatrixXd P = psi_matrix(RationalCurve::monomial({1, 3}), 1);
  ASSERT_EQ(P.rows(), 4);
  ASSERT_EQ(P.cols(), 3);
  Eigen::MatrixXd want = Eigen::MatrixXd::Zero(4, 3);
  want(0, 0) = 1;
  want(1, 1) = 1;
  want(3, 2) = 1;
  EXPECT_EQ(P, want);
}

TEST(PsiMatrix, TwistedCubicShape) {
  const Eigen::MatrixXd P = psi_matrix(scenarios::twisted_cubic(), 3);
  EXPECT_EQ(P.rows(), 10);
  EXPECT_EQ(P.cols(), 20);
  EXPECT_EQ(numerical_rank(P), 10);
}

TEST(PsiMatrix, RationalCurveRaises) {
  try {
    psi_matrix(scenarios::inverse_curve(), 2);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPolynomialParametrization);
  }
}

TEST(PsiRank, WitnessCurveSurjective) {
  const auto r = psi_rank(RationalCurve::monomial({1, 2, 3}), 3);
  EXPECT_EQ(r.rank, 10);
  EXPECT_TRUE(r.surjective);
}

TEST(PsiRank, PlaneParabolaKernelIsTheRelation) {
  const auto r = psi_rank(RationalCurve::monomial({1, 2}), 2);
  EXPECT_EQ(r.kernel_dim, 1);
  EXPECT_TRUE(r.surjective);
}

TEST(PsiRank, GenericQuadraticCurveSurjective) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Polynomial> phi;
  for (int i = 0; i < 3; ++i) phi.push_back(Polynomial({u(rng), u(rng), u(rng)}));
  EXPECT_TRUE(psi_rank(RationalCurve::polynomial(phi), 2).surjective);
}

TEST(ExponentCoverage, Cases) {
  EXPECT_TRUE(exponent_coverage(1, 5).complete);
  const auto c = exponent_coverage(3, 3);
  EXPECT_TRUE(c.complete);
  EXPECT_EQ(c.covered.size(), 10u);
  EXPECT_FALSE(exponent_coverage(5, 2).complete);
  EXPECT_FALSE(exponent_coverage(4, 1).complete);
}

TEST(ImageDimension, Cases) {
  const auto a = image_dimension_xd(3, 3);
  EXPECT_EQ(a.dim, 9);
  EXPECT_EQ(a.exponents.count(8), 0u);
  EXPECT_EQ(a.exponents.count(9), 1u);
  EXPECT_EQ(image_dimension_xd(1, 6).dim, 7);
  EXPECT_EQ(image_dimension_xd(2, 2).dim, 5);
  EXPECT_THROW(image_dimension_xd(4, 3), Error);
}

TEST(PlacesAtInfinity, ConicCases) {
  EXPECT_EQ(places_at_infinity(scenarios::unit_circle()), 0);
  EXPECT_EQ(places_at_infinity(plane({{1, 1, 1.0}, {0, 0, -1.0}})), 2);
  EXPECT_EQ(places_at_infinity(scenarios::parabola()), 1);
  PlaneCurve c = scenarios::unit_circle();
  c.places_override = 3;
  EXPECT_EQ(places_at_infinity(c), 3);
}

TEST(SamplePlaneCurve, PointsLieOnTheCurve) {
  const auto c = scenarios::unit_circle();
  const Eigen::MatrixXd pts = sample_plane_curve(c, 2.0, 9);
  ASSERT_GT(pts.cols(), 0);
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    const double x[] = {pts(0, i), pts(1, i)};
    EXPECT_NEAR(c.F(x), 0.0, 1e-10);
  }
}

TEST(Bounds, PlaneFormula) { EXPECT_EQ(plane_bound(3, 3, 1), 10); }

TEST(Bounds, LineCollapse) {
  for (int s = 1; s <= 20; ++s) EXPECT_EQ(rational_odd_bound(1, s, 0), s);
}

TEST(Bounds, ZalarComparisonRows) {
  EXPECT_EQ(zalar_baseline(3, 2), 4);
  EXPECT_EQ(rational_odd_bound(3, 2, 0), 5);
  EXPECT_EQ(xd_curve_bound(3, 3), 5);
  EXPECT_EQ(zalar_baseline(9, 5), 40);
  EXPECT_EQ(rational_odd_bound(9, 5, 0), 41);
  EXPECT_EQ(xd_curve_bound(9, 9), 28);
}

TEST(Bounds, LowerBoundCases) {
  EXPECT_EQ(lower_bound(3, 5).value, 8);
  EXPECT_EQ(lower_bound(1, 7).value, 4);
  EXPECT_EQ(lower_bound(2, 4).value, 5);
  EXPECT_TRUE(lower_bound(4, 3).advisory);
  EXPECT_FALSE(lower_bound(3, 5).advisory);
}

TEST(Bounds, CeilDivHandlesNegatives) {
  EXPECT_EQ(ceil_div(7, 2), 4);
  EXPECT_EQ(ceil_div(-7, 2), -3);
  EXPECT_EQ(ceil_div(6, 3), 2);
}

TEST(Bounds, TableOmitsInapplicableRows) {
  BoundParams p;
  p.strength = 4;
  p.d = p.D = 3;
  const auto t = upper_bounds(p);
  EXPECT_EQ(t.find(BoundSetting::RationalOdd), nullptr);
  ASSERT_NE(t.find(BoundSetting::RationalEven), nullptr);
  EXPECT_EQ(t.find(BoundSetting::RationalEven)->value, 7);
  EXPECT_FALSE(t.omitted.empty());
}

TEST(Bounds, SettingNamesRoundTrip) {
  for (auto s : {BoundSetting::Plane, BoundSetting::PlaneCompact, BoundSetting::RationalOdd, BoundSetting::RationalEven,
                 BoundSetting::XdCurve, BoundSetting::Line, BoundSetting::Caratheodory, BoundSetting::RsBaseline,
                 BoundSetting::ZalarBaseline}) {
    EXPECT_EQ(bound_setting_from_string(to_string(s)), s);
  }
}
