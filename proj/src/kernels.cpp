#include "curvequad/kernels.hpp"

#include <vector>

#include "curvequad/error.hpp"

namespace curvequad::kernels {
namespace {

constexpr Eigen::Index kParallelThreshold = 2048;

// Fills column i of A from the coordinates x (length dim). `powers` is a
// scratch buffer of size dim × (max_degree + 1).
inline void fill_column(const MonomialBasis& basis, const double* x, int dim,
                        std::vector<double>& powers, double* column) {
  const int stride = basis.max_degree() + 1;
  for (int k = 0; k < dim; ++k) {
    double* row = powers.data() + static_cast<std::ptrdiff_t>(k) * stride;
    row[0] = 1.0;
    for (int e = 1; e < stride; ++e) row[e] = row[e - 1] * x[k];
  }
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const MultiIndex& alpha = basis[j];
    double v = 1.0;
    for (int k = 0; k < dim; ++k) v *= powers[static_cast<std::size_t>(k * stride + alpha[k])];
    column[j] = v;
  }
}

void check_dims(const MonomialBasis& basis, Eigen::Index dim) {
  if (basis.nvars() != dim) {
    throw Error(ErrorKind::DimensionMismatch, "node dimension does not match the monomial basis");
  }
}

}  // namespace

namespace serial {

Eigen::MatrixXd monomial_matrix(const MonomialBasis& basis, const Eigen::MatrixXd& nodes) {
  check_dims(basis, nodes.rows());
  const int dim = static_cast<int>(nodes.rows());
  Eigen::MatrixXd A(static_cast<Eigen::Index>(basis.size()), nodes.cols());
  std::vector<double> powers(static_cast<std::size_t>(dim * (basis.max_degree() + 1)));
  for (Eigen::Index i = 0; i < nodes.cols(); ++i) {
    fill_column(basis, nodes.col(i).data(), dim, powers, A.col(i).data());
  }
  return A;
}

Eigen::MatrixXd curve_monomial_matrix(const MonomialBasis& basis, const RationalCurve& curve,
                                      std::span<const double> t) {
  check_dims(basis, curve.n());
  const int dim = curve.n();
  const auto N = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd A(static_cast<Eigen::Index>(basis.size()), N);
  std::vector<double> powers(static_cast<std::size_t>(dim * (basis.max_degree() + 1)));
  for (Eigen::Index i = 0; i < N; ++i) {
    const auto x = curve.point(t[static_cast<std::size_t>(i)]);
    fill_column(basis, x.data(), dim, powers, A.col(i).data());
  }
  return A;
}

Eigen::VectorXd accumulate(const Eigen::MatrixXd& A, const Eigen::VectorXd& w) {
  if (A.cols() != w.size()) throw Error(ErrorKind::DimensionMismatch, "weights vs nodes");
  Eigen::VectorXd m(A.rows());
  for (Eigen::Index j = 0; j < A.rows(); ++j) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < A.cols(); ++i) acc += A(j, i) * w[i];
    m[j] = acc;
  }
  return m;
}

}  // namespace serial

namespace omp {

Eigen::MatrixXd monomial_matrix(const MonomialBasis& basis, const Eigen::MatrixXd& nodes) {
  check_dims(basis, nodes.rows());
  const int dim = static_cast<int>(nodes.rows());
  Eigen::MatrixXd A(static_cast<Eigen::Index>(basis.size()), nodes.cols());
  const Eigen::Index N = nodes.cols();
#pragma omp parallel
  {
    std::vector<double> powers(static_cast<std::size_t>(dim * (basis.max_degree() + 1)));
#pragma omp for schedule(static)
    for (Eigen::Index i = 0; i < N; ++i) {
      fill_column(basis, nodes.col(i).data(), dim, powers, A.col(i).data());
    }
  }
  return A;
}

Eigen::MatrixXd curve_monomial_matrix(const MonomialBasis& basis, const RationalCurve& curve,
                                      std::span<const double> t) {
  check_dims(basis, curve.n());
  const int dim = curve.n();
  const auto N = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd A(static_cast<Eigen::Index>(basis.size()), N);
#pragma omp parallel
  {
    std::vector<double> powers(static_cast<std::size_t>(dim * (basis.max_degree() + 1)));
#pragma omp for schedule(static)
    for (Eigen::Index i = 0; i < N; ++i) {
      const auto x = curve.point(t[static_cast<std::size_t>(i)]);
      fill_column(basis, x.data(), dim, powers, A.col(i).data());
    }
  }
  return A;
}

Eigen::VectorXd accumulate(const Eigen::MatrixXd& A, const Eigen::VectorXd& w) {
  if (A.cols() != w.size()) throw Error(ErrorKind::DimensionMismatch, "weights vs nodes");
  Eigen::VectorXd m(A.rows());
  const Eigen::Index rows = A.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < rows; ++j) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < A.cols(); ++i) acc += A(j, i) * w[i];
    m[j] = acc;
  }
  return m;
}

}  // namespace omp

Eigen::MatrixXd monomial_matrix(const MonomialBasis& basis, const Eigen::MatrixXd& nodes) {
  return nodes.cols() >= kParallelThreshold ? omp::monomial_matrix(basis, nodes)
                                            : serial::monomial_matrix(basis, nodes);
}

Eigen::MatrixXd curve_monomial_matrix(const MonomialBasis& basis, const RationalCurve& curve,
                                      std::span<const double> t) {
  return static_cast<Eigen::Index>(t.size()) >= kParallelThreshold
             ? omp::curve_monomial_matrix(basis, curve, t)
             : serial::curve_monomial_matrix(basis, curve, t);
}

Eigen::VectorXd accumulate(const Eigen::MatrixXd& A, const Eigen::VectorXd& w) {
  return A.cols() >= kParallelThreshold ? omp::accumulate(A, w) : serial::accumulate(A, w);
}

}  // namespace curvequad::kernels
