#include <gtest/gtest.h>

#include <cmath>

#include "curvequad/error.hpp"
#include "curvequad/gauss.hpp"
#include "curvequad/scenarios.hpp"
#include "curvequad/synthesis.hpp"

using namespace curvequad;

namespace {

QuadratureRule with_parameters(QuadratureRule r) {
  r.parameter_values.assign(r.nodes.data(), r.nodes.data() + r.size());
  return r;
}

double penalty_sum(const QuadratureRule& r) {
  double s = 0.0;
  for (int i = 0; i < r.size(); ++i) s += r.nodes(0, i) * r.nodes(0, i);
  return s;
}

}  // namespace

TEST(Penalty, SumOfSquaresAndPoleTerms) {
  const auto line = RationalCurve::monomial({1});
  EXPECT_DOUBLE_EQ(rational_penalty(line, 3.0), 9.0);
  EXPECT_DOUBLE_EQ(rational_penalty_derivative(line, 3.0), 6.0);
  const auto inv = scenarios::inverse_curve();
  EXPECT_DOUBLE_EQ(rational_penalty(inv, 2.0), 4.0 + 0.25);
  const double h = 1e-6;
  const double fd = (rational_penalty(inv, 1.5 + h) - rational_penalty(inv, 1.5 - h)) / (2 * h);
  EXPECT_NEAR(rational_penalty_derivative(inv, 1.5), fd, 1e-6);
}

TEST(TargetNodes, Formulas) {
  EXPECT_EQ(rational_target_nodes(scenarios::inverse_curve(), 3), 5);
  EXPECT_EQ(rational_target_nodes(scenarios::twisted_cubic(), 3), 5);
  EXPECT_EQ(plane_target_nodes(scenarios::unit_circle(), 3), 4);
}

TEST(Pullback, LineGivesTheGaussRule) {
  const auto nu = MeasureSpec::uniform(-1.0, 1.0);
  const auto r = pullback_gauss(RationalCurve::monomial({1}), nu, 5);
  const auto g = gauss_rule(line_moments(nu, 5), 5);
  ASSERT_EQ(r.rule.size(), 3);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.rule.nodes(0, i), g.nodes(0, i), 1e-14);
}

TEST(Pullback, TwistedCubicStrengthThree) {
  const auto nu = MeasureSpec::uniform(0.0, 1.0);
  const auto curve = scenarios::twisted_cubic();
  const auto r = pullback_gauss(curve, nu, 3);
  EXPECT_EQ(r.rule.size(), 5);
  EXPECT_LE(check_exactness(r.rule, curve_moments(nu, curve, 3), 3).max_residual, 1e-8);
  EXPECT_EQ(r.rule.provenance, Provenance::Pullback);
}

TEST(Pullback, TwoAtomsMapToThemselves) {
  const auto nu = MeasureSpec::from_parameter_atoms({-0.3, 0.8}, {1.0, 0.5});
  const auto r = pullback_gauss(scenarios::twisted_cubic(), nu, 3);
  ASSERT_EQ(r.rule.size(), 2);
  EXPECT_NEAR(r.rule.nodes(0, 0), -0.3, 1e-10);
  EXPECT_NEAR(r.rule.nodes(2, 1), 0.512, 1e-10);
}

TEST(Pullback, RationalParametrizationRaises) {
  EXPECT_THROW(pullback_gauss(scenarios::inverse_curve(), MeasureSpec::uniform(1.0, 2.0), 3), Error);
}

TEST(Prune, SmallRuleUnchanged) {
  const auto g = gauss_rule(line_moments(MeasureSpec::uniform(-1.0, 1.0), 5), 5);
  const auto p = caratheodory_prune(g, line_moments(MeasureSpec::uniform(-1.0, 1.0), 5), 5);
  ASSERT_EQ(p.size(), 3);
  EXPECT_TRUE(p.nodes == g.nodes);
}

TEST(Prune, ParabolaAtomsReachTheRankBound) {
  const auto mu = scenarios::random_parabola_atoms(5, 100);
  const auto m = ambient_moments(mu, 2, 3);
  QuadratureRule r;
  r.nodes.resize(2, 100);
  r.weights.resize(100);
  for (int i = 0; i < 100; ++i) {
    r.nodes(0, i) = mu.atoms[static_cast<std::size_t>(i)].x[0];
    r.nodes(1, i) = mu.atoms[static_cast<std::size_t>(i)].x[1];
    r.weights[i] = mu.atoms[static_cast<std::size_t>(i)].w;
  }
  const auto p = caratheodory_prune(r, m, 3);
  EXPECT_LE(p.size(), 7);
  EXPECT_LE(check_exactness(p, m, 3).max_residual, 1e-9);
  for (int i = 0; i < p.size(); ++i) EXPECT_GT(p.weights[i], 0.0);
}

TEST(Prune, CoincidentAtomsMerge) {
  QuadratureRule r;
  r.nodes.resize(1, 2);
  r.nodes << 0.25, 0.25;
  r.weights.resize(2);
  r.weights << 1.0, 2.0;
  const auto m = line_moments(MeasureSpec::from_parameter_atoms({0.25}, {3.0}), 3);
  const auto p = caratheodory_prune(r, m, 3);
  ASSERT_EQ(p.size(), 1);
  EXPECT_NEAR(p.weights[0], 3.0, 1e-14);
}

TEST(NlpRational, LineRecoversGauss) {
  const auto nu = MeasureSpec::uniform(-1.0, 1.0);
  const auto line = RationalCurve::monomial({1});
  const auto res = nlp_rational(line, curve_moments(nu, line, 5), 5, {}, &nu);
  ASSERT_TRUE(res.converged) << res.message;
  const auto g = gauss_rule(line_moments(nu, 5), 5);
  ASSERT_EQ(res.rule.size(), 3);
  EXPECT_NEAR(penalty_sum(res.rule), penalty_sum(g), 1e-8);
}

TEST(NlpRational, InverseCurveMeetsTheBound) {
  const auto nu = MeasureSpec::uniform(1.0, 2.0);
  const auto c = scenarios::inverse_curve();
  const NLPConfig cfg;
  const auto res = nlp_rational(c, curve_moments(nu, c, 3), 3, cfg, &nu);
  ASSERT_TRUE(res.converged) << res.message;
  EXPECT_LE(res.rule.size(), 5);
  EXPECT_LE(res.residual, 1e-6);
  for (double t : res.rule.parameter_values) EXPECT_GE(std::abs(t), cfg.pole_margin);
}

TEST(NlpRational, SingleAtomTarget) {
  const auto nu = MeasureSpec::from_parameter_atoms({0.4}, {2.0});
  const auto c = scenarios::twisted_cubic();
  const auto res = nlp_rational(c, curve_moments(nu, c, 3), 3, {}, &nu);
  ASSERT_EQ(res.rule.size(), 1);
  EXPECT_NEAR(res.rule.parameter_values[0], 0.4, 1e-8);
}

TEST(NlpRational, SeedReproducibility) {
  const auto c = scenarios::twisted_cubic();
  const auto m = curve_moments(MeasureSpec::uniform(0.0, 1.0), c, 3);
  NLPConfig cfg;
  cfg.seed = 99;
  const auto a = nlp_rational(c, m, 3, cfg);
  const auto b = nlp_rational(c, m, 3, cfg);
  EXPECT_TRUE(a.rule.nodes == b.rule.nodes);
  EXPECT_TRUE(a.rule.weights == b.rule.weights);
}

TEST(NlpPlane, CircleUniform) {
  const auto res = nlp_plane(scenarios::unit_circle(), scenarios::circle_uniform_moments(3), 3);
  ASSERT_TRUE(res.converged) << res.message;
  EXPECT_LE(res.rule.size(), 4);
  EXPECT_LE(res.residual, 1e-6);
  EXPECT_LE(res.kkt.max_gradient_residual(), 1e-4);
}

TEST(NlpPlane, ThreeAtomsRecovered) {
  std::vector<Atom> atoms{{{1.0, 0.0}, 1.0}, {{0.0, 1.0}, 0.5}, {{-0.6, -0.8}, 1.5}};
  const auto mu = MeasureSpec::from_atoms(atoms);
  const auto res = nlp_plane(scenarios::unit_circle(), ambient_moments(mu, 2, 5), 5, {}, &mu);
  EXPECT_EQ(res.rule.size(), 3);
  EXPECT_LE(res.residual, 1e-8);
}

TEST(NlpPlane, HyperbolaCountIsReported) {
  PlaneCurve hyp;
  hyp.F.add_term(MultiIndex({1, 1}), 1.0);
  hyp.F.add_term(MultiIndex({0, 0}), -1.0);
  std::vector<Atom> atoms;
  for (double x : {0.5, 0.8, 1.0, 1.3, 1.7, 2.0, 2.5}) atoms.push_back({{x, 1.0 / x}, 1.0});
  const auto mu = MeasureSpec::from_atoms(atoms);
  const auto res = nlp_plane(hyp, ambient_moments(mu, 2, 3), 3, {}, &mu);
  EXPECT_EQ(res.target_nodes, 2 * 2 - 1 + 1 + 4);
  EXPECT_LE(check_exactness(res.rule, ambient_moments(mu, 2, 3), 3).max_residual, 1e-8);
}

TEST(Kkt, GaussRuleIsStationary) {
  const auto nu = MeasureSpec::uniform(-1.0, 1.0);
  const auto m = line_moments(nu, 5);
  const auto g = with_parameters(gauss_rule(m, 5));
  const auto rep = kkt_analyze(g, RationalCurve::monomial({1}), 5);
  EXPECT_LE(rep.max_H(), 1e-8);
  EXPECT_LE(rep.max_gradient_residual(), 1e-8);
  EXPECT_FALSE(rep.rank_deficient);
  // The orthogonal polynomial of degree 3 divides the fitted H.
  const auto pi = recurrence_from_moments(m, 3).orthogonal_polynomial(3);
  const auto [q, r] = divmod(rep.H, pi, 1e-8);
  EXPECT_TRUE(r.is_zero());
}

TEST(Kkt, LineFitIsSquare) {
  // Three nodes at strength 5 give six equations in six multipliers, so any
  // three-node rule fits exactly; a moved node shows up as lost exactness.
  const auto m = line_moments(MeasureSpec::uniform(-1.0, 1.0), 5);
  auto g = with_parameters(gauss_rule(m, 5));
  g.nodes(0, 0) += 0.1;
  g.parameter_values[0] += 0.1;
  EXPECT_LE(kkt_analyze(g, RationalCurve::monomial({1}), 5).fit_residual, 1e-10);
  EXPECT_GT(check_exactness(g, m, 5).max_residual, 1e-3);
}

TEST(Kkt, PerturbedRuleIsFlagged) {
  const auto nu = MeasureSpec::uniform(1.0, 2.0);
  const auto c = scenarios::inverse_curve();
  const auto res = nlp_rational(c, curve_moments(nu, c, 3), 3, {}, &nu);
  ASSERT_TRUE(res.converged);
  EXPECT_LE(res.kkt.max_gradient_residual(), 1e-6);
  auto r = res.rule;
  r.parameter_values[1] += 0.1;
  const auto x = c.point(r.parameter_values[1]);
  r.nodes(0, 1) = x[0];
  r.nodes(1, 1) = x[1];
  const auto rep = kkt_analyze(r, c, 3);
  EXPECT_GT(std::max(rep.max_H(), rep.max_gradient_residual()), 1e-4);
}

TEST(Kkt, CircleFourNodeTangency) {
  QuadratureRule r;
  r.nodes.resize(2, 4);
  r.weights = Eigen::VectorXd::Constant(4, 0.25);
  for (int i = 0; i < 4; ++i) {
    r.nodes(0, i) = std::cos(M_PI / 2 * i);
    r.nodes(1, i) = std::sin(M_PI / 2 * i);
  }
  const auto rep = kkt_analyze(r, scenarios::unit_circle(), 3, {1.0, 0.0});
  EXPECT_EQ(rep.excluded.size(), 1u);
  EXPECT_LE(rep.max_gradient_residual(), 1e-4);
}

TEST(InitialRule, InfeasibleMomentsRaise) {
  MomentVector m = scenarios::circle_uniform_moments(3);
  m.at(MultiIndex({2, 0})) = 5.0;  // not a moment sequence of any measure on the circle
  try {
    initial_rule(scenarios::unit_circle(), m, 3);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InfeasibleStart);
  }
}
