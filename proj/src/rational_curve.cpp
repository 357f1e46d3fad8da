#include "curvequad/rational_curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvequad/error.hpp"

namespace curvequad {

RationalCurve::RationalCurve(Polynomial phi0, std::vector<Polynomial> phi)
    : phi0_(std::move(phi0)), phi_(std::move(phi)) {
  if (phi_.empty()) throw Error(ErrorKind::InvalidInput, "curve needs at least one coordinate");
  if (phi0_.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "denominator φ₀ is zero");
  for (const auto& f : phi_) {
    degrees_.push_back(f.degree());
    D_ = std::max(D_, f.degree());
  }
  if (!phi0_.is_constant()) {
    for (const auto& r : real_roots(phi0_)) poles_.push_back(r.value);
  }
}

RationalCurve RationalCurve::polynomial(std::vector<Polynomial> phi) {
  return RationalCurve(Polynomial::constant(1.0), std::move(phi));
}

RationalCurve RationalCurve::monomial(const std::vector<int>& exponents) {
  std::vector<Polynomial> phi;
  for (int e : exponents) phi.push_back(Polynomial::monomial(e));
  return polynomial(std::move(phi));
}

std::vector<double> RationalCurve::point(double t) const {
  const double den = phi0_(t);
  std::vector<double> x(phi_.size());
  for (std::size_t i = 0; i < phi_.size(); ++i) x[i] = phi_[i](t) / den;
  return x;
}

std::vector<double> RationalCurve::tangent(double t) const {
  const double den = phi0_(t);
  const double dden = phi0_.derivative()(t);
  std::vector<double> v(phi_.size());
  for (std::size_t i = 0; i < phi_.size(); ++i) {
    v[i] = (phi_[i].derivative()(t) * den - phi_[i](t) * dden) / (den * den);
  }
  return v;
}

double RationalCurve::pole_distance(double t) const {
  double d = std::numeric_limits<double>::infinity();
  for (double z : poles_) d = std::min(d, std::abs(t - z));
  return d;
}

ComposedPolynomial compose_with_parametrization(const MultivariatePolynomial& p,
                                                const RationalCurve& curve) {
  if (p.nvars() != curve.n()) {
    throw Error(ErrorKind::DimensionMismatch, "polynomial has " + std::to_string(p.nvars()) +
                                                  " variables but the curve lives in R^" +
                                                  std::to_string(curve.n()));
  }
  if (p.is_zero()) return {Polynomial(), 0};

  if (curve.is_polynomial()) {
    const double c = curve.phi0()[0];
    Polynomial acc;
    for (const auto& [alpha, coeff] : p.terms()) {
      Polynomial term = Polynomial::constant(coeff / std::pow(c, alpha.order()));
      for (int i = 0; i < curve.n(); ++i) term = term * curve.phi(i).pow(alpha[i]);
      acc = acc + term;
    }
    return {acc, 0};
  }

  const int e = p.degree();
  Polynomial acc;
  for (const auto& [alpha, coeff] : p.terms()) {
    Polynomial term = curve.phi0().pow(e - alpha.order()).scaled(coeff);
    for (int i = 0; i < curve.n(); ++i) term = term * curve.phi(i).pow(alpha[i]);
    acc = acc + term;
  }
  return {acc, e};
}

void curve_monomials(const MonomialBasis& basis, const RationalCurve& curve, double t,
                     std::vector<double>& values, std::vector<double>* derivatives) {
  const int n = curve.n();
  const int top = basis.max_degree();
  const double q = curve.phi0()(t);
  const double dq = curve.phi0().derivative()(t);
  std::vector<double> x(static_cast<std::size_t>(n)), dx(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double pj = curve.phi(j)(t);
    x[static_cast<std::size_t>(j)] = pj / q;
    dx[static_cast<std::size_t>(j)] = (curve.phi(j).derivative()(t) * q - pj * dq) / (q * q);
  }
  // pw[j][e] = x_j^e
  std::vector<std::vector<double>> pw(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(top) + 1, 1.0));
  for (int j = 0; j < n; ++j) {
    for (int e = 1; e <= top; ++e) pw[static_cast<std::size_t>(j)][static_cast<std::size_t>(e)] = pw[static_cast<std::size_t>(j)][static_cast<std::size_t>(e - 1)] * x[static_cast<std::size_t>(j)];
  }
  values.assign(basis.size(), 0.0);
  if (derivatives) derivatives->assign(basis.size(), 0.0);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const MultiIndex& a = basis[k];
    double v = 1.0;
    for (int j = 0; j < n; ++j) v *= pw[static_cast<std::size_t>(j)][static_cast<std::size_t>(a[j])];
    values[k] = v;
    if (!derivatives) continue;
    double d = 0.0;
    for (int j = 0; j < n; ++j) {
      if (a[j] == 0) continue;
      double term = a[j] * pw[static_cast<std::size_t>(j)][static_cast<std::size_t>(a[j] - 1)] * dx[static_cast<std::size_t>(j)];
      for (int l = 0; l < n; ++l) {
        if (l != j) term *= pw[static_cast<std::size_t>(l)][static_cast<std::size_t>(a[l])];
      }
      d += term;
    }
    (*derivatives)[k] = d;
  }
}

}  // namespace curvequad
