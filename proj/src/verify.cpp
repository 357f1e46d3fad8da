#include "curvequad/verify.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "curvequad/curves.hpp"
#include "curvequad/error.hpp"
#include "curvequad/gauss.hpp"

namespace curvequad {

ExactnessReport check_exactness(const QuadratureRule& rule, const MomentVector& m_target, int strength) {
  if (strength > m_target.max_degree()) {
    throw Error(ErrorKind::InsufficientDegree, "target moments stop below the requested strength");
  }
  if (rule.size() > 0 && rule.dim() != m_target.nvars()) {
    throw Error(ErrorKind::DimensionMismatch, "rule and moments live in different dimensions");
  }
  ExactnessReport rep;
  rep.per_degree.assign(static_cast<std::size_t>(strength) + 1, 0.0);
  const MonomialBasis basis(m_target.nvars(), strength);
  // Extended precision keeps the summation's own rounding out of the
  // residual, which matters for zero moments of widely spread nodes.
  for (const MultiIndex& alpha : basis) {
    long double sum = 0.0L;
    for (int i = 0; i < rule.size(); ++i) {
      long double mono = rule.weights[i];
      for (int j = 0; j < alpha.nvars(); ++j) {
        for (int e = 0; e < alpha[j]; ++e) mono *= rule.nodes(j, i);
      }
      sum += mono;
    }
    const double m = m_target[alpha];
    const double r = static_cast<double>(std::abs(sum - m) / std::max(1.0L, std::abs(static_cast<long double>(m))));
    auto& slot = rep.per_degree[static_cast<std::size_t>(alpha.order())];
    slot = std::max(slot, r);
    if (r > rep.max_residual || rep.worst_index.empty()) {
      rep.max_residual = r;
      rep.worst_index = alpha.key();
    }
  }
  return rep;
}

namespace {

BoundRow row_for(const BoundReport& b, int achieved) {
  BoundRow row{b, achieved, false};
  row.satisfied = b.kind == BoundKind::Upper ? achieved <= b.value : achieved >= b.value;
  return row;
}

// (t, t^d) up to nonzero scaling of the coordinates.
std::optional<int> xd_witness_degree(const RationalCurve& c) {
  if (!c.is_polynomial() || c.n() != 2) return std::nullopt;
  auto is_monomial = [](const Polynomial& p, int deg) {
    if (p.degree() != deg) return false;
    for (int k = 0; k < deg; ++k) {
      if (p[k] != 0.0) return false;
    }
    return true;
  };
  if (!is_monomial(c.phi(0), 1)) return std::nullopt;
  const int d = c.phi(1).degree();
  if (d < 1 || !is_monomial(c.phi(1), d)) return std::nullopt;
  return d;
}

}  // namespace

BoundCheck check_bounds(const QuadratureRule& rule, const RationalCurve& curve, int strength,
                        const LowerBoundContext& ctx) {
  BoundCheck out;
  out.achieved = canonicalize(rule).size();
  BoundParams params;
  params.strength = strength;
  params.D = curve.D();
  params.d = curve.D();
  params.p = curve.p_real_zeros();
  params.n = curve.n();
  const BoundTable table = upper_bounds(params);
  const BoundSetting rational = strength % 2 == 1 ? BoundSetting::RationalOdd : BoundSetting::RationalEven;
  for (const auto& r : table.reports) {
    if (r.setting == rational || r.setting == BoundSetting::Caratheodory) out.upper.push_back(row_for(r, out.achieved));
  }
  if (const auto d = xd_witness_degree(curve)) {
    BoundParams xp = params;
    xp.d = *d;
    const BoundTable xt = upper_bounds(xp);
    if (const auto* r = xt.find(BoundSetting::XdCurve)) {
      out.upper.push_back(row_for(*r, out.achieved));
    } else {
      out.omitted.push_back({BoundSetting::XdCurve, "needs strength >= d"});
    }
  }
  for (const auto& o : table.omitted) {
    if (o.setting == rational) out.omitted.push_back(o);
  }

  if (curve.is_polynomial()) {
    BoundReport lb = lower_bound(curve.D(), strength);
    lb.params.n = curve.n();
    if (!ctx.surjective || !ctx.nondegenerate) {
      lb.advisory = true;
      lb.note += !ctx.surjective ? "; psi not surjective at this strength" : "";
      lb.note += !ctx.nondegenerate ? "; pulled-back measure not certified nondegenerate" : "";
    }
    out.lower.push_back(row_for(lb, out.achieved));
  } else {
    out.omitted.push_back({BoundSetting::RationalOdd, "lower bound needs a polynomial parametrization"});
  }
  return out;
}

BoundCheck check_bounds(const QuadratureRule& rule, const PlaneCurve& curve, int strength) {
  BoundCheck out;
  out.achieved = canonicalize(rule).size();
  BoundParams params;
  params.strength = strength;
  params.d = curve.degree();
  params.D = curve.degree();
  params.t = places_at_infinity(curve);
  params.n = 2;
  const BoundTable table = upper_bounds(params);
  for (const auto& r : table.reports) {
    switch (r.setting) {
      case BoundSetting::Plane:
      case BoundSetting::PlaneCompact:
      case BoundSetting::RsBaseline:
      case BoundSetting::Caratheodory:
        out.upper.push_back(row_for(r, out.achieved));
        break;
      default:
        break;
    }
  }
  for (const auto& o : table.omitted) {
    if (o.setting == BoundSetting::Plane || o.setting == BoundSetting::PlaneCompact) out.omitted.push_back(o);
  }
  return out;
}

LowerBoundContext lower_bound_context(const RationalCurve& curve, const MeasureSpec& nu, int strength) {
  LowerBoundContext ctx;
  if (!curve.is_polynomial()) return ctx;
  ctx.surjective = psi_rank(curve, strength).surjective;
  const int m = curve.D() * strength;
  const int need = minimal_nodes(m);
  if (nu.kind == MeasureKind::Atoms) {
    std::set<double> distinct;
    for (const auto& a : nu.atoms) distinct.insert(a.x.at(0));
    ctx.nondegenerate = static_cast<int>(distinct.size()) >= need;
  } else {
    try {
      const MomentVector mv = line_moments(nu, gauss_moment_degree(m));
      recurrence_from_moments(mv, need);
      ctx.nondegenerate = true;
    } catch (const DegenerateMeasure&) {
      ctx.nondegenerate = false;
    } catch (const Error&) {
      ctx.nondegenerate = false;
    }
  }
  return ctx;
}

DegeneracyCheck degeneracy_transfer(const RationalCurve& curve, const MeasureSpec& nu, int k, double rel_tol) {
  if (!curve.is_polynomial()) {
    throw Error(ErrorKind::NotPolynomialParametrization, "degeneracy transfer needs a polynomial parametrization");
  }
  DegeneracyCheck out;
  out.k = k;
  const int D = curve.D();
  if (nu.kind == MeasureKind::Atoms) {
    std::set<double> distinct;
    for (const auto& a : nu.atoms) distinct.insert(a.x.at(0));
    out.atoms = static_cast<int>(distinct.size());
  }
  const MomentMatrix Mc = moment_matrix(curve_moments(nu, curve, 2 * k), k);
  const MomentMatrix Ml = moment_matrix(line_moments(nu, 2 * D * k), D * k);
  out.rank_curve = degeneracy_test(Mc, rel_tol).rank;
  out.rank_line = degeneracy_test(Ml, rel_tol).rank;
  out.psi_rank = psi_rank(curve, k, rel_tol).rank;
  out.ambient_dim = static_cast<int>(Mc.basis.size());
  out.curve_degenerate = out.rank_curve < out.psi_rank;
  out.line_degenerate = out.rank_line < D * k + 1;
  out.ambient_degenerate = out.rank_curve < out.ambient_dim;
  out.agree = out.curve_degenerate == out.line_degenerate;
  return out;
}

VerificationReport verify_rule(const QuadratureRule& rule, const AnyCurve& curve, const MeasureSpec& measure,
                               int strength, double tolerance) {
  VerificationReport rep;
  rep.tolerance = tolerance;
  if (const auto* rc = std::get_if<RationalCurve>(&curve)) {
    rep.exactness = check_exactness(rule, curve_moments(measure, *rc, strength), strength);
    const LowerBoundContext ctx = rc->is_polynomial() ? lower_bound_context(*rc, measure, strength) : LowerBoundContext{};
    rep.bounds = check_bounds(rule, *rc, strength, ctx);
  } else {
    const auto& pc = std::get<PlaneCurve>(curve);
    rep.exactness = check_exactness(rule, ambient_moments(measure, 2, strength), strength);
    rep.bounds = check_bounds(rule, pc, strength);
  }
  rep.pass = true;
  if (!(rep.exactness.max_residual <= tolerance)) {
    rep.pass = false;
    rep.reasons.push_back("exactness residual above tolerance at index " + rep.exactness.worst_index);
  }
  for (int i = 0; i < rule.size(); ++i) {
    if (!(rule.weights[i] > 0.0)) {
      rep.pass = false;
      rep.reasons.push_back("nonpositive weight at node " + std::to_string(i));
      break;
    }
  }
  for (const auto& row : rep.bounds.upper) {
    if (!row.satisfied) {
      rep.pass = false;
      rep.reasons.push_back(std::string("upper bound ") + std::string(to_string(row.bound.setting)) + " exceeded");
    }
  }
  for (const auto& row : rep.bounds.lower) {
    if (!row.satisfied && !row.bound.advisory) {
      rep.pass = false;
      rep.reasons.push_back("rule undercuts the certified lower bound");
    }
  }
  return rep;
}

}  // namespace curvequad
