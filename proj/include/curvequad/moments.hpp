#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "curvequad/multi_index.hpp"
#include "curvequad/rational_curve.hpp"

namespace curvequad {

/// Default relative singular-value threshold for rank decisions.
inline constexpr double kRankTolerance = 1e-8;

/// Truncated moments m_α for every |α| ≤ max_degree, stored in the graded
/// lexicographic order of MonomialBasis(nvars, max_degree).
class MomentVector {
 public:
  MomentVector(int nvars, int max_degree);
  MomentVector(int nvars, int max_degree, std::vector<double> values);
  /// Univariate convenience: values[k] = m_k.
  static MomentVector univariate(std::vector<double> values);

  int nvars() const noexcept { return basis_.nvars(); }
  int max_degree() const noexcept { return basis_.max_degree(); }
  const MonomialBasis& basis() const noexcept { return basis_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator[](const MultiIndex& alpha) const;
  double& at(const MultiIndex& alpha);
  /// Univariate access m_k.
  double operator[](int k) const;

  double mass() const { return values_.front(); }
  /// Restriction to a smaller maximal degree.
  MomentVector truncated(int max_degree) const;

 private:
  MonomialBasis basis_;
  std::vector<double> values_;
};

struct Atom {
  std::vector<double> x;  // parameter value (size 1) or point in ℝⁿ
  double w = 0.0;
};

enum class DensityName { Uniform, Gaussian, Tabulated };

/// Density on the parameter line restricted to [a, b]. Uniform is Lebesgue
/// measure; Gaussian is the normal pdf with the given mean and sigma;
/// Tabulated is the piecewise-linear interpolant of (t, w) samples.
struct Density {
  DensityName name = DensityName::Uniform;
  double a = -1.0;
  double b = 1.0;
  double mean = 0.0;
  double sigma = 1.0;
  std::vector<std::pair<double, double>> table;

  double operator()(double t) const;
};

enum class MeasureKind { Atoms, Density, Raw };

struct MeasureSpec {
  MeasureKind kind = MeasureKind::Atoms;
  std::vector<Atom> atoms;
  Density density;
  std::optional<MomentVector> raw;
  /// Minimum distance the density support must keep from poles of φ₀.
  double pole_margin = 1e-6;

  static MeasureSpec from_atoms(std::vector<Atom> atoms);
  /// Atoms on the parameter line.
  static MeasureSpec from_parameter_atoms(const std::vector<double>& t, const std::vector<double>& w);
  static MeasureSpec uniform(double a, double b);
  static MeasureSpec gaussian(double mean, double sigma, double a, double b);
  static MeasureSpec from_moments(MomentVector m);

  /// Point dimension of the atoms (0 when there are none).
  int atom_dim() const;
  void validate() const;
};

/// m_α = ∫ Π (φᵢ/φ₀)^{αᵢ} dν for a measure ν on the parameter line.
/// Atoms are summed exactly; densities are integrated adaptively to absolute
/// tolerance 1e-12 per moment; raw parameter moments are pushed forward
/// through the composed polynomials (polynomial parametrizations only).
MomentVector curve_moments(const MeasureSpec& nu, const RationalCurve& curve, int max_degree);

/// Moments of a measure given directly in ℝⁿ (atoms with points, or raw).
MomentVector ambient_moments(const MeasureSpec& mu, int nvars, int max_degree);

/// Moments of ν itself on the line (identity parametrization).
MomentVector line_moments(const MeasureSpec& nu, int max_degree);

struct MomentMatrix {
  int k = 0;
  MonomialBasis basis{1, 0};
  Eigen::MatrixXd entries;
};

/// M_k with entry (β, γ) = m_{β+γ}. Throws InsufficientDegree if 2k exceeds
/// the available moment degree.
MomentMatrix moment_matrix(const MomentVector& m, int k);

struct DegeneracyResult {
  int rank = 0;
  std::vector<MultivariatePolynomial> kernel;
  Eigen::VectorXd eigenvalues;  // ascending, of the diagonally equilibrated matrix
  bool degenerate(std::size_t basis_size) const { return static_cast<std::size_t>(rank) < basis_size; }
};

/// Rank of M_k from the eigenvalues of D M_k D with D = diag(M_k)^(-1/2);
/// kernel polynomials are the eigenvectors below the threshold, mapped back.
DegeneracyResult degeneracy_test(const MomentMatrix& M, double rel_tol = kRankTolerance);

/// Smallest eigenvalue relative to the largest; negative beyond -1e-10 means
/// the moments cannot come from a nonnegative measure.
double psd_margin(const MomentMatrix& M);

}  // namespace curvequad
