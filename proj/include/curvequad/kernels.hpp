#pragma once

#include <Eigen/Core>
#include <span>

#include "curvequad/multi_index.hpp"
#include "curvequad/rational_curve.hpp"

// Node-moment kernels. Each entry point has a serial reference and an OpenMP
// version; the OpenMP loops split only over independent columns (nodes) or
// rows (monomials) and keep every inner sum in the serial order, so both
// produce bitwise identical results.

namespace curvequad::kernels {

namespace serial {

/// A(j, i) = x_i^{α_j} for nodes stored column-wise in `nodes` (dim × N).
Eigen::MatrixXd monomial_matrix(const MonomialBasis& basis, const Eigen::MatrixXd& nodes);

/// A(j, i) = Π_k (φ_k(t_i)/φ₀(t_i))^{α_j,k}.
Eigen::MatrixXd curve_monomial_matrix(const MonomialBasis& basis, const RationalCurve& curve,
                                      std::span<const double> t);

/// m_j = Σ_i A(j, i) w_i, summed in node order.
Eigen::VectorXd accumulate(const Eigen::MatrixXd& A, const Eigen::VectorXd& w);

}  // namespace serial

namespace omp {

Eigen::MatrixXd monomial_matrix(const MonomialBasis& basis, const Eigen::MatrixXd& nodes);
Eigen::MatrixXd curve_monomial_matrix(const MonomialBasis& basis, const RationalCurve& curve,
                                      std::span<const double> t);
Eigen::VectorXd accumulate(const Eigen::MatrixXd& A, const Eigen::VectorXd& w);

}  // namespace omp

// Dispatch used by the rest of the library: OpenMP above a size threshold.
Eigen::MatrixXd monomial_matrix(const MonomialBasis& basis, const Eigen::MatrixXd& nodes);
Eigen::MatrixXd curve_monomial_matrix(const MonomialBasis& basis, const RationalCurve& curve,
                                      std::span<const double> t);
Eigen::VectorXd accumulate(const Eigen::MatrixXd& A, const Eigen::VectorXd& w);

}  // namespace curvequad::kernels
