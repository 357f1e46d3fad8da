#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "curvequad/bounds.hpp"
#include "curvequad/moments.hpp"
#include "curvequad/quadrature_rule.hpp"
#include "curvequad/rational_curve.hpp"

namespace curvequad {

struct ExactnessReport {
  double max_residual = 0.0;
  /// Maximum residual among indices of each total degree 0..strength.
  std::vector<double> per_degree;
  std::string worst_index;
};

/// |Σ ωᵢ xᵢ^α − m_α| / max(1, |m_α|) for every |α| ≤ strength, computed with
/// plain loops that share nothing with the synthesis kernels.
ExactnessReport check_exactness(const QuadratureRule& rule, const MomentVector& m_target, int strength);

struct BoundRow {
  BoundReport bound;
  int achieved = 0;
  bool satisfied = false;
};

/// What is known about the lower-bound hypotheses for the measure at hand.
struct LowerBoundContext {
  /// ψ is surjective at the rule strength (the genericity the bound needs).
  bool surjective = false;
  /// The pulled-back measure has at least minimal_nodes(D·strength) points.
  bool nondegenerate = false;
};

struct BoundCheck {
  int achieved = 0;
  std::vector<BoundRow> upper;
  std::vector<BoundRow> lower;
  std::vector<OmittedBound> omitted;
};

/// Node count after canonicalization compared with every applicable bound.
/// Lower rows are advisory unless both hypotheses in `ctx` hold and the
/// strength is at least D.
BoundCheck check_bounds(const QuadratureRule& rule, const RationalCurve& curve, int strength,
                        const LowerBoundContext& ctx = {});
BoundCheck check_bounds(const QuadratureRule& rule, const PlaneCurve& curve, int strength);

/// Lower-bound hypotheses evaluated for a polynomial curve and a measure on
/// its parameter line.
LowerBoundContext lower_bound_context(const RationalCurve& curve, const MeasureSpec& nu, int strength);

/// One comparison of moment-matrix ranks on the curve and on the line.
struct DegeneracyCheck {
  int k = 0;
  int atoms = -1;          // distinct atoms when ν is discrete
  int rank_curve = 0;      // rank M_k(μ)
  int rank_line = 0;       // rank M_{Dk}(ν)
  int psi_rank = 0;        // rank ψ_k = dimension of the curve's coordinate ring in degree ≤ k
  int ambient_dim = 0;     // dim ℝ[x]_{≤k}
  bool curve_degenerate = false;    // rank M_k(μ) < rank ψ_k
  bool line_degenerate = false;     // rank M_{Dk}(ν) < Dk + 1
  bool ambient_degenerate = false;  // rank M_k(μ) < dim ℝ[x]_{≤k}
  bool agree = false;
};

/// Degeneracy of μ = φ₊ν at degree k against degeneracy of ν at degree Dk.
/// The curve verdict is taken modulo the curve's ideal; the ambient verdict
/// is reported alongside.
DegeneracyCheck degeneracy_transfer(const RationalCurve& curve, const MeasureSpec& nu, int k,
                                    double rel_tol = kRankTolerance);

struct VerificationReport {
  ExactnessReport exactness;
  double tolerance = 1e-8;
  BoundCheck bounds;
  std::vector<DegeneracyCheck> degeneracy;
  bool pass = false;
  std::vector<std::string> reasons;
};

using AnyCurve = std::variant<RationalCurve, PlaneCurve>;

/// Full check of a rule against a curve and a measure. For rational curves
/// the measure lives on the parameter line; for plane curves it is given by
/// atoms in the plane or raw moments.
VerificationReport verify_rule(const QuadratureRule& rule, const AnyCurve& curve, const MeasureSpec& measure,
                               int strength, double tolerance = 1e-8);

}  // namespace curvequad
