#pragma once

#include <span>
#include <vector>

#include "curvequad/moments.hpp"
#include "curvequad/polynomial.hpp"
#include "curvequad/quadrature_rule.hpp"

namespace curvequad {

/// Three-term recurrence π_{k+1}(t) = (t − a_k) π_k(t) − b_k π_{k−1}(t) for the
/// monic orthogonal polynomials of a measure. b[0] holds the total mass.
struct Recurrence {
  std::vector<double> a;
  std::vector<double> b;

  int length() const noexcept { return static_cast<int>(a.size()); }
  /// Monic orthogonal polynomial π_k for k ≤ length().
  Polynomial orthogonal_polynomial(int k) const;
  /// Moments m_0..m_{2·length()−1} reproduced from the recurrence.
  std::vector<double> moments() const;
};

struct GaussOptions {
  /// Degeneracy threshold on b_k relative to the scale of the centered
  /// moment sequence.
  double degeneracy_tol = 1e-11;
  /// Return the exact atomic decomposition instead of throwing
  /// DegenerateMeasure.
  bool recover_degenerate = true;
};

/// ℓ recurrence coefficients from raw univariate moments m_0..m_{2ℓ−1}.
///
/// Cholesky factorization of the Hankel matrix, carried out in extended
/// precision on moments centered at the mean and scaled by the standard
/// deviation; the coefficients are mapped back afterwards.
/// Throws DegenerateMeasure(depth) when b_depth vanishes.
Recurrence recurrence_from_moments(const MomentVector& m, int ell, const GaussOptions& opts = {});
Recurrence recurrence_from_moments(std::span<const double> m, int ell, const GaussOptions& opts = {});

/// Gauss rule with minimal_nodes(strength) nodes from the Jacobi matrix
/// eigen-decomposition. Even strength 2ℓ is served by the rule of strength
/// 2ℓ + 1. Degenerate measures yield their atoms when opts.recover_degenerate.
QuadratureRule gauss_rule(const MomentVector& m, int strength, const GaussOptions& opts = {});
QuadratureRule gauss_rule(std::span<const double> m, int strength, const GaussOptions& opts = {});

/// Nodes and weights of the Jacobi matrix of a recurrence.
QuadratureRule rule_from_recurrence(const Recurrence& rec, int strength);

/// ⌈(strength + 1) / 2⌉.
constexpr int minimal_nodes(int strength) { return strength / 2 + 1; }

/// Highest moment degree gauss_rule needs for a given strength.
constexpr int gauss_moment_degree(int strength) { return 2 * minimal_nodes(strength) - 1; }

}  // namespace curvequad
