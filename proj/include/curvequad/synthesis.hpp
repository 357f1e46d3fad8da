#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "curvequad/moments.hpp"
#include "curvequad/polynomial.hpp"
#include "curvequad/quadrature_rule.hpp"
#include "curvequad/rational_curve.hpp"
#include "curvequad/verify.hpp"

namespace curvequad {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

struct NLPConfig {
  /// Discretization size for measure-based starts, and sample count for
  /// starts built from moments alone.
  int max_nodes_init = 400;
  /// Disk radius for the plane program; defaults to twice the largest node
  /// norm of the initial rule.
  std::optional<double> disk_radius;
  double pole_margin = 1e-3;
  double merge_tol = 1e-6;
  /// Relative to the total mass.
  double weight_drop_tol = 1e-10;
  int max_outer_iters = 40;
  int max_inner_iters = 400;
  double penalty_growth = 10.0;
  std::uint64_t seed = kDefaultSeed;
  /// Converged rules must match every target moment to this relative residual.
  double exactness_tol = 1e-8;
  /// Half-width of the parameter interval sampled when only moments are known.
  double parameter_range = 8.0;
  /// Curve point that receives the leftover mass in the plane program;
  /// defaults to a curve point nearest the origin.
  std::optional<std::array<double, 2>> mass_node;
  /// Rounds of tentative node removal after the first solve.
  int max_drop_rounds = 12;
};

/// Nodes falling in one interval (z_i, z_{i+1}) between consecutive poles.
struct IntervalClass {
  double lo = 0.0;
  double hi = 0.0;
  /// Unique minimizer of the penalty h on the interval.
  double minimizer = 0.0;
  std::vector<int> nodes;
  std::vector<int> left;   // nodes in (lo, minimizer)
  std::vector<int> right;  // nodes in (minimizer, hi)
  /// Real zeros of H in the interval, or -1 when H vanishes identically.
  int h_roots = 0;
  /// ⌈#T/2⌉ when #T is odd, #T/2 + 1 when even.
  int candidate_bound = 0;
};

struct KKTReport {
  /// Multipliers in MonomialBasis order (plane: degrees 1..strength only).
  std::vector<double> lambda;
  /// |H(tᵢ)| (plane: |G(xᵢ)|) divided by the multiplier norm.
  std::vector<double> H_values;
  /// |H′(tᵢ) + h′(tᵢ)/ωᵢ| for rational curves; tangency angle in radians
  /// between ∇F and ∇G for plane curves.
  std::vector<double> gradient_residuals;
  /// Sign condition H′ ≥ 0 left of the h-minimizer and ≤ 0 right of it.
  std::vector<bool> sign_ok;
  std::vector<IntervalClass> sign_pattern;
  /// Numerator of H in the parameter t (rational case).
  Polynomial H;
  bool plane = false;
  bool rank_deficient = false;
  int fit_rank = 0;
  int fit_unknowns = 0;
  double fit_residual = 0.0;
  /// Nodes excluded from the plane analysis (the mass-correction node).
  std::vector<int> excluded;

  double max_H() const;
  double max_gradient_residual() const;
};

struct SynthesisResult {
  QuadratureRule rule;
  double residual = 0.0;
  KKTReport kkt;
  BoundCheck bound_check;
  bool converged = false;
  /// Node count an optimal solution is known to reach.
  int target_nodes = 0;
  bool target_met = false;
  std::string method;
  std::string message;
  int outer_iterations = 0;
};

/// Gauss rule of strength·D for ν on the line, mapped through φ.
SynthesisResult pullback_gauss(const RationalCurve& curve, const MeasureSpec& nu, int strength);

/// Removes nodes along null directions of the node-moment matrix until at
/// most rank-many remain, keeping every moment of degree ≤ strength.
QuadratureRule caratheodory_prune(const QuadratureRule& rule, const MomentVector& m_target, int strength,
                                  double merge_tol = 1e-6);

/// Feasible start for the programs below: the measure's atoms or a dense
/// discretization of its density, or else an NNLS fit on sampled curve
/// points, reduced by caratheodory_prune.
QuadratureRule initial_rule(const RationalCurve& curve, const MomentVector& m_target, int strength,
                            const NLPConfig& cfg = {}, const MeasureSpec* nu = nullptr);
QuadratureRule initial_rule(const PlaneCurve& curve, const MomentVector& m_target, int strength,
                            const NLPConfig& cfg = {}, const MeasureSpec* mu = nullptr);

/// Penalized program min Σ h(tᵢ) on the parameter line. `nu` seeds the
/// Tchakaloff start when given; otherwise a sampled grid is fitted by NNLS.
SynthesisResult nlp_rational(const RationalCurve& curve, const MomentVector& m_target, int strength,
                             const NLPConfig& cfg = {}, const MeasureSpec* nu = nullptr);

/// Program min Σ ωᵢ over nodes on F = 0 inside a disk, matching moments of
/// degree 1..strength, followed by one mass-correction node.
SynthesisResult nlp_plane(const PlaneCurve& curve, const MomentVector& m_target, int strength,
                          const NLPConfig& cfg = {}, const MeasureSpec* mu = nullptr);

/// Least-squares fit of the multipliers to the stationarity equations.
KKTReport kkt_analyze(const QuadratureRule& rule, const RationalCurve& curve, int strength);
/// Plane version; `base` is the mass-correction point, excluded from the fit
/// and used as the coordinate origin for G.
KKTReport kkt_analyze(const QuadratureRule& rule, const PlaneCurve& curve, int strength,
                      std::array<double, 2> base = {0.0, 0.0});

/// Penalty h(t) = t² + Σ 1/(t − z)² over the real poles, and its derivative.
double rational_penalty(const RationalCurve& curve, double t);
double rational_penalty_derivative(const RationalCurve& curve, double t);

/// Target node counts: Ds − ⌈D/2⌉ + p + 1 (odd strength) or Ds + p + 1
/// (even strength), and ds − ⌈d/2⌉ + 1 + 2t for plane curves.
int rational_target_nodes(const RationalCurve& curve, int strength);
int plane_target_nodes(const PlaneCurve& curve, int strength);

}  // namespace curvequad
