#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace curvequad {

enum class BoundSetting {
  Plane,
  PlaneCompact,
  RationalOdd,
  RationalEven,
  XdCurve,
  Line,
  Caratheodory,
  RsBaseline,
  ZalarBaseline,
};

std::string_view to_string(BoundSetting s);
BoundSetting bound_setting_from_string(std::string_view s);

enum class BoundKind { Upper, Lower };

/// Curve and strength data the bound formulas draw on. `strength` is the
/// exactness degree of the rule; odd strengths are 2s − 1, even ones 2ℓ.
struct BoundParams {
  int strength = 1;
  int d = 1;   // degree of the curve (plane degree, or exponent for y = x^d)
  int D = 1;   // max numerator degree of a rational parametrization
  int t = 0;   // real places at infinity
  int p = 0;   // distinct real zeros of φ₀
  int n = 2;   // ambient dimension
};

struct BoundReport {
  BoundSetting setting = BoundSetting::Line;
  BoundKind kind = BoundKind::Upper;
  BoundParams params;
  long long value = 0;
  std::string formula;
  std::string source;
  /// Lower bounds whose hypotheses fail are still reported but advisory.
  bool advisory = false;
  std::string note;
};

struct OmittedBound {
  BoundSetting setting;
  std::string reason;
};

struct BoundTable {
  std::vector<BoundReport> reports;
  std::vector<OmittedBound> omitted;

  const BoundReport* find(BoundSetting s) const;
};

/// Integer ceiling of num / den for den > 0, valid for negative numerators.
constexpr long long ceil_div(long long num, long long den) {
  return num >= 0 ? (num + den - 1) / den : -((-num) / den);
}

/// s for strength 2s − 1, or ℓ for strength 2ℓ.
constexpr int half_strength(int strength) { return strength % 2 == 1 ? (strength + 1) / 2 : strength / 2; }

// Individual formulas; s is the half-strength of an odd strength 2s − 1.
long long plane_bound(int d, int s, int t);              // ds − ⌈d/2⌉ + 1 + 2t
long long plane_compact_bound(int d, int s);             // ds − ⌈d/2⌉ + 1
long long rational_odd_bound(int D, int s, int p);       // Ds − ⌈D/2⌉ + p + 1
long long rational_even_bound(int D, int s, int p);      // Ds + p + 1, strength 2s
long long xd_curve_bound(int d, int strength);           // ⌈(d·k − 1)/2 − d(d−3)/4⌉ + 1, k = strength
long long line_bound(int strength);                      // ⌈(strength + 1)/2⌉
long long caratheodory_bound(int n, int strength);       // binom(n + strength, strength)
long long rs_baseline(int d, int s);                     // ds
long long zalar_baseline(int d, int s);                  // ds − ⌈d/2⌉

/// Every upper bound whose hypotheses the parameters satisfy; the rest are
/// listed as omitted with the reason.
BoundTable upper_bounds(const BoundParams& params);

/// ds − ⌈d/2⌉ + 1 for strength 2s − 1, dℓ + 1 for strength 2ℓ; advisory when
/// strength < d.
BoundReport lower_bound(int d, int strength);

}  // namespace curvequad
