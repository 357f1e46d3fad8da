#include "curvequad/polynomial.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "curvequad/error.hpp"

namespace curvequad {
namespace {

std::vector<double> trimmed(std::vector<double> c) {
  if (c.empty()) return {0.0};
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return {0.0};
  const double cutoff = kTrimTolerance * scale;
  while (c.size() > 1 && std::abs(c.back()) <= cutoff) c.pop_back();
  return c;
}

// Real parts of the eigenvalues of the companion matrix whose imaginary parts
// are within the balancing error scale.
std::vector<double> companion_real_roots(const Polynomial& p) {
  const int n = p.degree();
  if (n < 1) return {};
  if (n == 1) return {-p[0] / p[1]};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -p[i] / p.leading();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  std::vector<double> out;
  for (const auto& z : solver.eigenvalues()) {
    if (std::abs(z.imag()) <= 1e-8 * (1.0 + std::abs(z.real()))) out.push_back(z.real());
  }
  return out;
}

double newton_polish(const Polynomial& f, double x) {
  const Polynomial df = f.derivative();
  const double slope = df(x);
  if (slope == 0.0 || !std::isfinite(slope)) return x;
  const double next = x - f(x) / slope;
  // A step that increases the residual means we were already at the noise floor.
  return std::abs(f(next)) <= std::abs(f(x)) ? next : x;
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(trimmed(std::move(coeffs))) {}

Polynomial Polynomial::monomial(int degree, double c) {
  std::vector<double> v(static_cast<std::size_t>(degree) + 1, 0.0);
  v.back() = c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::from_roots(std::span<const double> roots) {
  Polynomial p = constant(1.0);
  for (double r : roots) p = p * Polynomial({-r, 1.0});
  return p;
}

double Polynomial::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (double v : coeffs_) m = std::max(m, std::abs(v));
  return m;
}

double Polynomial::operator()(double t) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

long double Polynomial::eval_long(long double t) const noexcept {
  long double acc = 0.0L;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial();
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::scaled(double c) const {
  std::vector<double> v = coeffs_;
  for (double& x : v) x *= c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::monic() const {
  if (is_zero()) throw Error(ErrorKind::ZeroPolynomial, "cannot normalize the zero polynomial");
  return scaled(1.0 / leading());
}

Polynomial Polynomial::pow(int e) const {
  Polynomial result = constant(1.0);
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<double> v(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) v[k] += a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) v[k] += b.coeffs_[k];
  return Polynomial(std::move(v));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + b.scaled(-1.0); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  std::vector<double> v(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return Polynomial(std::move(v));
}

std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b, double tol) {
  if (b.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "division by the zero polynomial");
  if (a.degree() < b.degree()) return {Polynomial(), a};
  std::vector<double> rem = a.coeffs();
  const int db = b.degree();
  std::vector<double> quot(static_cast<std::size_t>(a.degree() - db) + 1, 0.0);
  for (int k = a.degree() - db; k >= 0; --k) {
    const double q = rem[static_cast<std::size_t>(k + db)] / b.leading();
    quot[static_cast<std::size_t>(k)] = q;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k + j)] -= q * b[j];
    rem[static_cast<std::size_t>(k + db)] = 0.0;
  }
  rem.resize(static_cast<std::size_t>(std::max(db, 1)));
  const double cutoff = tol * std::max(a.max_abs_coeff(), 1e-300);
  bool negligible = true;
  for (double v : rem) negligible = negligible && std::abs(v) <= cutoff;
  if (negligible) return {Polynomial(std::move(quot)), Polynomial()};
  // Drop leading noise relative to the dividend, not the remainder itself.
  while (rem.size() > 1 && std::abs(rem.back()) <= cutoff) rem.pop_back();
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial approximate_gcd(const Polynomial& a, const Polynomial& b, double tol) {
  if (a.is_zero() && b.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "gcd(0, 0)");
  if (b.is_zero()) return a.monic();
  if (a.is_zero()) return b.monic();
  Polynomial x = a.degree() >= b.degree() ? a.monic() : b.monic();
  Polynomial y = a.degree() >= b.degree() ? b.monic() : a.monic();
  while (!y.is_zero()) {
    if (y.degree() == 0) return Polynomial::constant(1.0);
    auto [q, r] = divmod(x, y, tol);
    x = y;
    y = r.is_zero() ? r : r.monic();
  }
  return x;
}

std::vector<RealRoot> real_roots(const Polynomial& p, double tol) {
  if (p.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "real_roots of the zero polynomial");
  if (p.degree() == 0) return {};

  // Yun's algorithm: factors[i] collects the roots of multiplicity i + 1.
  std::vector<Polynomial> factors;
  const Polynomial f = p.monic();
  const Polynomial df = f.derivative();
  Polynomial a = approximate_gcd(f, df, tol);
  Polynomial b = divmod(f, a, tol).first;
  Polynomial c = divmod(df, a, tol).first;
  Polynomial d = c - b.derivative();
  while (b.degree() > 0) {
    // d is a difference of nearly equal polynomials once only one factor is left.
    const bool d_vanishes = d.max_abs_coeff() <= tol * std::max(1.0, c.max_abs_coeff());
    Polynomial g = d_vanishes ? b.monic() : approximate_gcd(b, d, tol);
    factors.push_back(g);
    b = divmod(b, g, tol).first;
    c = divmod(d, g, tol).first;
    d = c - b.derivative();
    if (factors.size() > static_cast<std::size_t>(p.degree())) break;
  }

  std::vector<RealRoot> roots;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i].degree() < 1) continue;
    for (double r : companion_real_roots(factors[i])) {
      roots.push_back({newton_polish(factors[i], r), static_cast<int>(i) + 1});
    }
  }
  std::sort(roots.begin(), roots.end(),
            [](const RealRoot& x, const RealRoot& y) { return x.value < y.value; });

  // Roots the approximate GCD failed to pair up show up as near-duplicates.
  std::vector<RealRoot> merged;
  const double merge_tol = std::sqrt(tol);
  for (const auto& r : roots) {
    if (!merged.empty() &&
        std::abs(r.value - merged.back().value) <= merge_tol * (1.0 + std::abs(r.value))) {
      auto& m = merged.back();
      const int total = m.multiplicity + r.multiplicity;
      m.value = (m.value * m.multiplicity + r.value * r.multiplicity) / total;
      m.multiplicity = total;
    } else {
      merged.push_back(r);
    }
  }
  return merged;
}

}  // namespace curvequad
