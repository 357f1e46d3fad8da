#pragma once

#include <Eigen/Core>
#include <string_view>
#include <vector>

namespace curvequad {

enum class Provenance { Gauss, Pullback, NlpPlane, NlpRational, Pruned };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

/// Nodes (one column per node) with positive weights and a declared strength.
struct QuadratureRule {
  Eigen::MatrixXd nodes;    // dim × N
  Eigen::VectorXd weights;  // N
  int strength = 0;
  Provenance provenance = Provenance::Gauss;
  /// Parameter values when the nodes lie on a parametrized curve.
  std::vector<double> parameter_values;

  int dim() const noexcept { return static_cast<int>(nodes.rows()); }
  int size() const noexcept { return static_cast<int>(weights.size()); }
  double mass() const { return weights.sum(); }
};

/// Canonical form used before counting nodes: weights ≤ drop_tol · mass are
/// removed and nodes within merge_tol (Euclidean) are merged with summed
/// weights at the weighted mean location.
QuadratureRule canonicalize(const QuadratureRule& rule, double merge_tol = 1e-6,
                            double drop_tol = 1e-10);

}  // namespace curvequad
