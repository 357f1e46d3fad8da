#include "curvequad/integrate.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "curvequad/error.hpp"

namespace curvequad {

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Tricomi's initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[n - 1 - i] = x;
    weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

namespace {

struct Panel {
  double left;
  double right;
};

class PanelRule {
 public:
  explicit PanelRule(int order) { gauss_legendre(order, x_, w_); }

  void apply(const VectorIntegrand& f, double l, double r, Eigen::VectorXd& scratch,
             Eigen::VectorXd& out) const {
    const double half = 0.5 * (r - l);
    const double mid = 0.5 * (r + l);
    out.setZero();
    for (Eigen::Index i = 0; i < x_.size(); ++i) {
      f(mid + half * x_[i], scratch);
      out += (half * w_[i]) * scratch;
    }
  }

 private:
  Eigen::VectorXd x_, w_;
};

}  // namespace

Eigen::VectorXd integrate_adaptive(const VectorIntegrand& f, Eigen::Index components, double a,
                                   double b, const IntegrationOptions& opts) {
  if (!(a < b)) throw Error(ErrorKind::InvalidInput, "integration interval must satisfy a < b");
  static const PanelRule rule(16);
  const double length = b - a;

  Eigen::VectorXd total = Eigen::VectorXd::Zero(components);
  Eigen::VectorXd scratch(components), whole(components), left(components), right(components);

  // Depth-first, left child first: accepted panels arrive in ascending order.
  std::vector<Panel> stack{{a, b}};
  int evaluated = 0;
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    if (++evaluated > opts.max_panels) {
      throw Error(ErrorKind::IntegrationFailure,
                  "panel budget exhausted before reaching tolerance " + std::to_string(opts.abs_tol));
    }
    const double mid = 0.5 * (p.left + p.right);
    rule.apply(f, p.left, p.right, scratch, whole);
    rule.apply(f, p.left, mid, scratch, left);
    rule.apply(f, mid, p.right, scratch, right);
    const Eigen::VectorXd refined = left + right;
    const double share = opts.abs_tol * (p.right - p.left) / length;
    bool accept = true;
    for (Eigen::Index j = 0; j < components && accept; ++j) {
      // Large moments cannot be resolved below their own rounding level.
      const double floor = 64.0 * 2.2e-16 * std::abs(refined[j]);
      accept = std::abs(refined[j] - whole[j]) <= std::max(share, floor);
    }
    if (accept || mid <= p.left || mid >= p.right) {
      total += refined;
    } else {
      stack.push_back({mid, p.right});
      stack.push_back({p.left, mid});
    }
  }
  return total;
}

}  // namespace curvequad
