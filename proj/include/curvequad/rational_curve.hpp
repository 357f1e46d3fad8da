#pragma once

#include <optional>
#include <vector>

#include "curvequad/multi_index.hpp"
#include "curvequad/polynomial.hpp"

namespace curvequad {

/// Curve t ↦ (φ₁(t)/φ₀(t), …, φₙ(t)/φ₀(t)) in ℝⁿ.
class RationalCurve {
 public:
  RationalCurve(Polynomial phi0, std::vector<Polynomial> phi);

  /// Polynomial parametrization (φ₀ ≡ 1).
  static RationalCurve polynomial(std::vector<Polynomial> phi);
  /// Monomial witness curve (t^{e₁}, …, t^{eₙ}).
  static RationalCurve monomial(const std::vector<int>& exponents);

  int n() const noexcept { return static_cast<int>(phi_.size()); }
  const Polynomial& phi0() const noexcept { return phi0_; }
  const std::vector<Polynomial>& phi() const noexcept { return phi_; }
  const Polynomial& phi(int i) const { return phi_[static_cast<std::size_t>(i)]; }

  /// max deg φᵢ over i ≥ 1.
  int D() const noexcept { return D_; }
  const std::vector<int>& degrees() const noexcept { return degrees_; }
  bool is_polynomial() const noexcept { return phi0_.is_constant(); }

  /// Distinct real zeros of φ₀, ascending.
  const std::vector<double>& poles() const noexcept { return poles_; }
  int p_real_zeros() const noexcept { return static_cast<int>(poles_.size()); }

  /// Point φ(t) and its derivative; callers must keep t away from poles.
  std::vector<double> point(double t) const;
  std::vector<double> tangent(double t) const;
  /// Distance from t to the nearest pole (infinity when there are none).
  double pole_distance(double t) const;

 private:
  Polynomial phi0_;
  std::vector<Polynomial> phi_;
  int D_ = 0;
  std::vector<int> degrees_;
  std::vector<double> poles_;
};

/// Plane algebraic curve F(x, y) = 0.
struct PlaneCurve {
  MultivariatePolynomial F{2};
  /// Real places at infinity; computed from the leading form unless overridden.
  std::optional<int> places_override;
  bool smooth_claimed = true;

  int degree() const { return F.degree(); }
};

/// p(φ₁/φ₀, …, φₙ/φ₀) = numerator / φ₀^denominator_power.
struct ComposedPolynomial {
  Polynomial numerator;
  int denominator_power = 0;
};

/// Pullback of p along the parametrization. When φ₀ is constant the
/// denominator is folded into the numerator and the power is zero.
ComposedPolynomial compose_with_parametrization(const MultivariatePolynomial& p,
                                                const RationalCurve& curve);

/// Values of x(t)^α = Π (φᵢ(t)/φ₀(t))^{αᵢ} over a basis, and optionally their
/// t-derivatives.
void curve_monomials(const MonomialBasis& basis, const RationalCurve& curve, double t,
                     std::vector<double>& values, std::vector<double>* derivatives = nullptr);

}  // namespace curvequad
