#include <gtest/gtest.h>

#include <cmath>

#include "curvequad/error.hpp"
#include "curvequad/polynomial.hpp"
#include "curvequad/rational_curve.hpp"

using namespace curvequad;

TEST(Polynomial, EvaluatesConstantMonomialAndDoubleRoot) {
  EXPECT_EQ(Polynomial::constant(1.0)(7.3), 1.0);
  EXPECT_EQ(Polynomial::monomial(3)(2.0), 8.0);
  EXPECT_EQ(Polynomial({1.0, -2.0, 1.0})(1.0), 0.0);
}

TEST(Polynomial, TrimsNegligibleLeadingCoefficients) {
  const Polynomial p({1.0, 2.0, 1e-15});
  EXPECT_EQ(p.degree(), 1);
  EXPECT_TRUE(Polynomial({0.0, 0.0}).is_zero());
}

TEST(Polynomial, ArithmeticAndDivision) {
  const Polynomial a({-1.0, 0.0, 1.0});  // t^2 - 1
  const Polynomial b({1.0, 1.0});        // t + 1
  const auto [q, r] = divmod(a, b);
  EXPECT_TRUE(r.is_zero());
  EXPECT_NEAR(q[0], -1.0, 1e-15);
  EXPECT_NEAR(q[1], 1.0, 1e-15);
  const Polynomial prod = q * b;
  for (int k = 0; k <= 2; ++k) EXPECT_NEAR(prod[k], a[k], 1e-15);
  EXPECT_EQ(a.derivative(), Polynomial({0.0, 2.0}));
}

TEST(RealRoots, SimpleRoots) {
  const auto r = real_roots(Polynomial({-1.0, 0.0, 1.0}));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0].value, -1.0, 1e-14);
  EXPECT_NEAR(r[1].value, 1.0, 1e-14);
  EXPECT_EQ(r[0].multiplicity, 1);
}

TEST(RealRoots, NoRealRoots) { EXPECT_TRUE(real_roots(Polynomial({1.0, 0.0, 1.0})).empty()); }

TEST(RealRoots, MultiplicityFromFactoredForm) {
  const double roots[] = {2.0, 2.0, -3.0};
  const auto r = real_roots(Polynomial::from_roots(roots));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0].value, -3.0, 1e-10);
  EXPECT_EQ(r[0].multiplicity, 1);
  EXPECT_NEAR(r[1].value, 2.0, 1e-8);
  EXPECT_EQ(r[1].multiplicity, 2);
}

TEST(RealRoots, ZeroPolynomialRaises) {
  try {
    real_roots(Polynomial({0.0}));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroPolynomial);
  }
}

TEST(RealRoots, RoundTripOnRandomRootSets) {
  const double roots[] = {-2.5, -0.75, 0.1, 1.3, 4.0};
  const auto r = real_roots(Polynomial::from_roots(roots));
  ASSERT_EQ(r.size(), 5u);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(r[static_cast<std::size_t>(i)].value, roots[i], 1e-9);
}

TEST(MultiIndex, GradedLexOrder) {
  const MonomialBasis b(2, 2);
  ASSERT_EQ(b.size(), 6u);
  EXPECT_EQ(b[0].key(), "(0,0)");
  EXPECT_EQ(b[1].key(), "(1,0)");
  EXPECT_EQ(b[2].key(), "(0,1)");
  EXPECT_EQ(b[3].key(), "(2,0)");
  EXPECT_EQ(b[4].key(), "(1,1)");
  EXPECT_EQ(b[5].key(), "(0,2)");
  EXPECT_EQ(monomial_count(3, 3), 20);
  EXPECT_EQ(MultiIndex::parse_key("(1,2,0)"), MultiIndex({1, 2, 0}));
  EXPECT_EQ(b.index_of(MultiIndex({1, 1})), 4);
  EXPECT_EQ(b.index_of(MultiIndex({3, 0})), -1);
}

TEST(Compose, CoordinatePullback) {
  const auto c = RationalCurve::monomial({1, 2, 3});
  MultivariatePolynomial p(3);
  p.add_term(MultiIndex({1, 0, 0}), 1.0);
  const auto r = compose_with_parametrization(p, c);
  EXPECT_EQ(r.denominator_power, 0);
  EXPECT_EQ(r.numerator, Polynomial({0.0, 1.0}));
}

TEST(Compose, TwistedCubicRelationVanishes) {
  const auto c = RationalCurve::monomial({1, 2, 3});
  MultivariatePolynomial p(3);
  p.add_term(MultiIndex({1, 0, 1}), 1.0);
  p.add_term(MultiIndex({0, 2, 0}), -1.0);
  const auto r = compose_with_parametrization(p, c);
  EXPECT_TRUE(r.numerator.is_zero());
  EXPECT_EQ(r.denominator_power, 0);
}

TEST(Compose, RationalDenominatorPower) {
  const RationalCurve c(Polynomial({0.0, 1.0}), {Polynomial({1.0}), Polynomial({0.0, 0.0, 1.0})});
  MultivariatePolynomial p(2);
  p.add_term(MultiIndex({2, 0}), 1.0);
  const auto r = compose_with_parametrization(p, c);
  EXPECT_EQ(r.numerator, Polynomial({1.0}));
  EXPECT_EQ(r.denominator_power, 2);
}

TEST(Compose, DimensionMismatchRaises) {
  const auto c = RationalCurve::monomial({1, 2});
  MultivariatePolynomial p(3);
  p.add_term(MultiIndex({1, 0, 0}), 1.0);
  try {
    compose_with_parametrization(p, c);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(RationalCurve, PolesAndDegree) {
  const RationalCurve c(Polynomial({-1.0, 0.0, 1.0}), {Polynomial({0.0, 1.0}), Polynomial({1.0, 0.0, 0.0, 1.0})});
  EXPECT_EQ(c.D(), 3);
  ASSERT_EQ(c.p_real_zeros(), 2);
  EXPECT_NEAR(c.poles()[0], -1.0, 1e-12);
  EXPECT_NEAR(c.pole_distance(0.5), 0.5, 1e-12);
  const auto x = c.point(0.5);
  EXPECT_NEAR(x[0], 0.5 / -0.75, 1e-14);
}

TEST(MultivariatePolynomial, EvaluationAndPartials) {
  MultivariatePolynomial p(2);
  p.add_term(MultiIndex({2, 0}), 1.0);
  p.add_term(MultiIndex({0, 2}), 1.0);
  p.add_term(MultiIndex({0, 0}), -1.0);
  const double pt[] = {0.6, 0.8};
  EXPECT_NEAR(p(pt), 0.0, 1e-15);
  EXPECT_NEAR(p.partial(0)(pt), 1.2, 1e-15);
  EXPECT_EQ(p.homogeneous_part(2).terms().size(), 2u);
  EXPECT_EQ(p.degree(), 2);
}
