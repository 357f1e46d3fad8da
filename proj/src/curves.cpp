#include "curvequad/curves.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "curvequad/error.hpp"

namespace curvequad {

Eigen::MatrixXd psi_matrix(const RationalCurve& curve, int s) {
  if (!curve.is_polynomial()) {
    throw Error(ErrorKind::NotPolynomialParametrization, "ψ needs a constant denominator φ₀");
  }
  if (s < 0) throw Error(ErrorKind::InvalidInput, "negative degree for ψ");
  const MonomialBasis basis(curve.n(), s);
  const int rows = curve.D() * s + 1;
  Eigen::MatrixXd psi = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    MultivariatePolynomial mono(curve.n());
    mono.add_term(basis[j], 1.0);
    const Polynomial g = compose_with_parametrization(mono, curve).numerator;
    for (int k = 0; k <= g.degree() && k < rows; ++k) psi(k, static_cast<Eigen::Index>(j)) = g[k];
  }
  return psi;
}

int numerical_rank(const Eigen::MatrixXd& A, double rel_tol) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) r += sv[i] > rel_tol * sv[0] ? 1 : 0;
  return r;
}

PsiRank psi_rank(const RationalCurve& curve, int s, double rel_tol) {
  const Eigen::MatrixXd psi = psi_matrix(curve, s);
  PsiRank out;
  out.rank = numerical_rank(psi, rel_tol);
  out.target_dim = static_cast<int>(psi.rows());
  out.surjective = out.rank == out.target_dim;
  out.kernel_dim = static_cast<int>(psi.cols()) - out.rank;
  return out;
}

ExponentCoverage exponent_coverage(int d, int s) {
  if (d < 1 || s < 0) throw Error(ErrorKind::InvalidInput, "exponent coverage needs d ≥ 1 and s ≥ 0");
  ExponentCoverage out;
  for (int a = 0; a <= s; ++a) {
    for (int b = 0; a + b <= s; ++b) {
      for (int c = 0; a + b + c <= s; ++c) out.covered.insert(a + b * (d - 1) + c * d);
    }
  }
  out.complete = static_cast<int>(out.covered.size()) == d * s + 1 && *out.covered.rbegin() == d * s;
  return out;
}

ImageDimension image_dimension_xd(int d, int s) {
  if (d < 1) throw Error(ErrorKind::DomainError, "d must be at least 1");
  if (s < d) throw Error(ErrorKind::DomainError, "image dimension formula needs s ≥ d");
  ImageDimension out;
  out.dim = d * s - d * (d - 3) / 2;
  for (int a = 0; a <= s; ++a) {
    for (int b = 0; a + b <= s; ++b) out.exponents.insert(a + b * d);
  }
  return out;
}

int places_at_infinity(const PlaneCurve& c) {
  if (c.places_override) return *c.places_override;
  if (c.F.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "plane curve with F = 0");
  const int d = c.F.degree();
  if (d < 1) throw Error(ErrorKind::InvalidInput, "plane curve must have degree at least 1");
  const MultivariatePolynomial lead = c.F.homogeneous_part(d);
  // F_d(1, m) = Σ c_{a,b} m^b over a + b = d.
  std::vector<double> coeffs(static_cast<std::size_t>(d) + 1, 0.0);
  for (const auto& [alpha, coeff] : lead.terms()) coeffs[static_cast<std::size_t>(alpha[1])] += coeff;
  const Polynomial slope_poly(coeffs);
  int count = 0;
  if (!slope_poly.is_zero() && slope_poly.degree() > 0) count += static_cast<int>(real_roots(slope_poly).size());
  if (coeffs[static_cast<std::size_t>(d)] == 0.0 || slope_poly.degree() < d) count += 1;
  return count;
}

Eigen::MatrixXd sample_plane_curve(const PlaneCurve& c, double radius, int per_axis) {
  std::vector<std::pair<double, double>> pts;
  const int d = c.F.degree();
  for (int axis = 0; axis < 2; ++axis) {
    for (int g = 0; g < per_axis; ++g) {
      // Offset grid avoids lines through symmetric special points.
      const double fixed = -radius + 2.0 * radius * (g + 0.5 + 0.0137) / per_axis;
      std::vector<double> coeffs(static_cast<std::size_t>(d) + 1, 0.0);
      for (const auto& [alpha, coeff] : c.F.terms()) {
        const int free_exp = alpha[1 - axis];
        coeffs[static_cast<std::size_t>(free_exp)] += coeff * std::pow(fixed, alpha[axis]);
      }
      const Polynomial line(coeffs);
      if (line.is_zero() || line.degree() == 0) continue;
      for (const auto& r : real_roots(line)) {
        if (std::abs(r.value) > radius) continue;
        pts.push_back(axis == 0 ? std::pair{fixed, r.value} : std::pair{r.value, fixed});
      }
    }
  }
  Eigen::MatrixXd out(2, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out(0, static_cast<Eigen::Index>(i)) = pts[i].first;
    out(1, static_cast<Eigen::Index>(i)) = pts[i].second;
  }
  return out;
}

}  // namespace curvequad
