#include "curvequad/bounds.hpp"

#include <cassert>

#include "curvequad/error.hpp"

namespace curvequad {

std::string_view to_string(BoundSetting s) {
  switch (s) {
    case BoundSetting::Plane: return "plane";
    case BoundSetting::PlaneCompact: return "plane-compact";
    case BoundSetting::RationalOdd: return "rational-odd";
    case BoundSetting::RationalEven: return "rational-even";
    case BoundSetting::XdCurve: return "xd-curve";
    case BoundSetting::Line: return "line";
    case BoundSetting::Caratheodory: return "caratheodory";
    case BoundSetting::RsBaseline: return "rs-baseline";
    case BoundSetting::ZalarBaseline: return "zalar-baseline";
  }
  return "line";
}

BoundSetting bound_setting_from_string(std::string_view s) {
  for (auto v : {BoundSetting::Plane, BoundSetting::PlaneCompact, BoundSetting::RationalOdd,
                 BoundSetting::RationalEven, BoundSetting::XdCurve, BoundSetting::Line,
                 BoundSetting::Caratheodory, BoundSetting::RsBaseline, BoundSetting::ZalarBaseline}) {
    if (to_string(v) == s) return v;
  }
  throw Error(ErrorKind::InvalidInput, "unknown bound setting '" + std::string(s) + "'");
}

const BoundReport* BoundTable::find(BoundSetting s) const {
  for (const auto& r : reports) {
    if (r.setting == s) return &r;
  }
  return nullptr;
}

namespace {
constexpr long long half_up(long long d) { return ceil_div(d, 2); }
}  // namespace

long long plane_bound(int d, int s, int t) { return 1LL * d * s - half_up(d) + 1 + 2LL * t; }
long long plane_compact_bound(int d, int s) { return 1LL * d * s - half_up(d) + 1; }
long long rational_odd_bound(int D, int s, int p) { return 1LL * D * s - half_up(D) + p + 1; }
long long rational_even_bound(int D, int s, int p) { return 1LL * D * s + p + 1; }

long long xd_curve_bound(int d, int strength) {
  // (dk − 1)/2 − d(d−3)/4 = (2(dk − 1) − d(d−3)) / 4
  const long long num = 2LL * (1LL * d * strength - 1) - 1LL * d * (d - 3);
  return ceil_div(num, 4) + 1;
}

long long line_bound(int strength) { return strength / 2 + 1; }

long long caratheodory_bound(int n, int strength) {
  long long c = 1;
  for (int i = 1; i <= strength; ++i) c = c * (n + i) / i;
  return c;
}

long long rs_baseline(int d, int s) { return 1LL * d * s; }
long long zalar_baseline(int d, int s) { return 1LL * d * s - half_up(d); }

BoundTable upper_bounds(const BoundParams& pr) {
  if (pr.strength < 0) throw Error(ErrorKind::InvalidInput, "negative strength");
  BoundTable table;
  const bool odd = pr.strength % 2 == 1;
  const int s = half_strength(pr.strength);
  auto add = [&](BoundSetting setting, long long value, std::string formula, std::string source,
                 std::string note = {}) {
    table.reports.push_back({setting, BoundKind::Upper, pr, value, std::move(formula), std::move(source),
                             false, std::move(note)});
  };
  auto omit = [&](BoundSetting setting, std::string reason) {
    table.omitted.push_back({setting, std::move(reason)});
  };
  const std::string odd_only = "formula is stated for odd strength 2s-1 only";

  if (odd) {
    add(BoundSetting::Plane, plane_bound(pr.d, s, pr.t), "d*s - ceil(d/2) + 1 + 2t",
        "plane curves of degree d with t places at infinity",
        "the 2t term may not be tight");
    if (pr.t == 0) {
      add(BoundSetting::PlaneCompact, plane_compact_bound(pr.d, s), "d*s - ceil(d/2) + 1",
          "compact plane curves");
    } else {
      omit(BoundSetting::PlaneCompact, "curve has places at infinity (t > 0)");
    }
    add(BoundSetting::RationalOdd, rational_odd_bound(pr.D, s, pr.p), "D*s - ceil(D/2) + p + 1",
        "rational curves, strength 2s-1");
    add(BoundSetting::RsBaseline, rs_baseline(pr.d, s), "d*s", "Riener-Schweighofer baseline");
    add(BoundSetting::ZalarBaseline, zalar_baseline(pr.d, s), "d*s - ceil(d/2)",
        "Zalar baseline for curves y = q(x), deg q = d");
    omit(BoundSetting::RationalEven, "strength is odd");
  } else {
    for (auto setting : {BoundSetting::Plane, BoundSetting::PlaneCompact, BoundSetting::RationalOdd,
                         BoundSetting::RsBaseline, BoundSetting::ZalarBaseline}) {
      omit(setting, odd_only);
    }
    add(BoundSetting::RationalEven, rational_even_bound(pr.D, s, pr.p), "D*s + p + 1",
        "rational curves, strength 2s");
  }

  if (pr.strength >= pr.d) {
    add(BoundSetting::XdCurve, xd_curve_bound(pr.d, pr.strength),
        "ceil((d*k - 1)/2 - d(d-3)/4) + 1, k = strength", "curves y = x^d, strength k >= d");
  } else {
    omit(BoundSetting::XdCurve, "needs strength >= d");
  }
  add(BoundSetting::Line, line_bound(pr.strength), "ceil((strength + 1)/2)", "Gaussian quadrature on a line");
  add(BoundSetting::Caratheodory, caratheodory_bound(pr.n, pr.strength), "binom(n + strength, strength)",
      "Caratheodory bound in R^n");
  return table;
}

BoundReport lower_bound(int d, int strength) {
  if (d < 1 || strength < 0) throw Error(ErrorKind::InvalidInput, "lower bound needs d >= 1, strength >= 0");
  BoundReport r;
  r.setting = BoundSetting::RationalOdd;
  r.kind = BoundKind::Lower;
  r.params.d = d;
  r.params.D = d;
  r.params.strength = strength;
  r.params.n = 3;
  if (strength % 2 == 1) {
    const int s = (strength + 1) / 2;
    r.value = 1LL * d * s - half_up(d) + 1;
    r.formula = "d*s - ceil(d/2) + 1";
  } else {
    r.setting = BoundSetting::RationalEven;
    r.value = 1LL * d * (strength / 2) + 1;
    r.formula = "d*l + 1";
  }
  // Both branches are the univariate Gauss count at strength d·strength.
  assert(r.value == ceil_div(1LL * d * strength + 1, 2));
  r.source = "minimal node count for generic polynomial curves in R^n, n >= 3";
  r.note = "assumes n >= 3 and a generic parametrization";
  if (strength < d) {
    r.advisory = true;
    r.note = "HypothesisViolated: strength < d; " + r.note;
  }
  return r;
}

}  // namespace curvequad
