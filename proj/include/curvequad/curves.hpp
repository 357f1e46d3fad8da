#pragma once

#include <Eigen/Core>
#include <set>

#include "curvequad/moments.hpp"
#include "curvequad/rational_curve.hpp"

namespace curvequad {

/// Matrix of ψ: ℝ[x₁..xₙ]_{≤s} → ℝ[t]_{≤Ds}, p ↦ p∘φ. Rows are t^0..t^{Ds},
/// columns follow MonomialBasis(n, s). Requires a polynomial parametrization.
Eigen::MatrixXd psi_matrix(const RationalCurve& curve, int s);

struct PsiRank {
  int rank = 0;
  bool surjective = false;
  /// Dimension of ker ψ (the curve's ideal in degree ≤ s).
  int kernel_dim = 0;
  int target_dim = 0;
};

PsiRank psi_rank(const RationalCurve& curve, int s, double rel_tol = kRankTolerance);

/// Numerical rank of a matrix by singular-value threshold.
int numerical_rank(const Eigen::MatrixXd& A, double rel_tol = kRankTolerance);

struct ExponentCoverage {
  std::set<int> covered;
  bool complete = false;
};

/// Exponents a + b(d−1) + cd with a + b + c ≤ s, i.e. the image of monomials
/// under the witness curve (t, t^{d−1}, t^d); complete when they fill [0, ds].
ExponentCoverage exponent_coverage(int d, int s);

struct ImageDimension {
  int dim = 0;
  std::set<int> exponents;
};

/// dim im ψ for the curve y = x^d: ds − d(d−3)/2, together with the exponent
/// set {a + bd : a + b ≤ s}. Throws DomainError when s < d.
ImageDimension image_dimension_xd(int d, int s);

/// Number of distinct real zero directions of the leading form F_d: real
/// roots of F_d(1, m) plus one when F_d(0, 1) = 0. A user override on the
/// curve takes precedence.
int places_at_infinity(const PlaneCurve& c);

/// Real points of F = 0 sampled along vertical and horizontal lines through
/// a grid of `per_axis` values in [-radius, radius].
Eigen::MatrixXd sample_plane_curve(const PlaneCurve& c, double radius, int per_axis);

}  // namespace curvequad
