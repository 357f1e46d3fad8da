#pragma once

#include <cstdint>
#include <vector>

#include "curvequad/moments.hpp"
#include "curvequad/rational_curve.hpp"

// Curves and measures used by the acceptance suite and the bench command.

namespace curvequad::scenarios {

/// (t, t², t³).
RationalCurve twisted_cubic();
/// (1/t, t): φ₀ = t, φ = (1, t²).
RationalCurve inverse_curve();
/// x² + y² − 1.
PlaneCurve unit_circle();
/// y − x².
PlaneCurve parabola();

/// Moments of the normalized arc-length measure on the unit circle:
/// m_{a,b} = (a−1)!!(b−1)!!/(a+b)!! for even a, b, and zero otherwise.
MomentVector circle_uniform_moments(int max_degree);

/// `count` atoms t ∈ [lo, hi] with weights in [0.5, 1.5].
MeasureSpec random_line_atoms(std::uint64_t seed, int count, double lo = -1.0, double hi = 1.0);

/// `count` atoms (x, x²) with x ∈ [-1, 1] and weights in [0.5, 1.5].
MeasureSpec random_parabola_atoms(std::uint64_t seed, int count);

}  // namespace curvequad::scenarios
