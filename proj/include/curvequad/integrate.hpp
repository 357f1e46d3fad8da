#pragma once

#include <Eigen/Core>
#include <functional>

namespace curvequad {

struct IntegrationOptions {
  double abs_tol = 1e-12;
  int max_panels = 1 << 16;
};

/// Vector-valued integrand: writes f(t) into `out` (pre-sized).
using VectorIntegrand = std::function<void(double t, Eigen::Ref<Eigen::VectorXd> out)>;

/// Adaptive bisection with a fixed 16-point Gauss–Legendre rule per panel.
/// A panel is accepted when the single-panel and two-half-panel estimates
/// agree to the tolerance share of its length for every component. Accepted
/// panels are summed left to right, so results are deterministic.
///
/// Throws IntegrationFailure when the panel budget is exhausted.
Eigen::VectorXd integrate_adaptive(const VectorIntegrand& f, Eigen::Index components, double a,
                                   double b, const IntegrationOptions& opts = {});

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// Legendre three-term recurrence.
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

}  // namespace curvequad
