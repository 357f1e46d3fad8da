#pragma once

#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace curvequad {

/// Coefficients below this fraction of the largest coefficient magnitude are
/// treated as zero when determining the degree.
inline constexpr double kTrimTolerance = 1e-12;

/// Dense univariate polynomial with real coefficients in ascending degree.
///
/// The stored coefficient list is always trimmed so that the last entry is the
/// leading coefficient; the zero polynomial is the single coefficient {0}.
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  explicit Polynomial(std::vector<double> coeffs);
  Polynomial(std::initializer_list<double> coeffs)
      : Polynomial(std::vector<double>(coeffs)) {}

  static Polynomial constant(double c) { return Polynomial({c}); }
  static Polynomial monomial(int degree, double c = 1.0);
  /// Monic polynomial with the given roots.
  static Polynomial from_roots(std::span<const double> roots);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }
  bool is_constant() const noexcept { return coeffs_.size() == 1; }

  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  double operator[](int k) const { return k < static_cast<int>(coeffs_.size()) ? coeffs_[k] : 0.0; }
  double leading() const noexcept { return coeffs_.back(); }
  double max_abs_coeff() const noexcept;

  /// Horner evaluation.
  double operator()(double t) const noexcept;
  long double eval_long(long double t) const noexcept;

  Polynomial derivative() const;
  Polynomial scaled(double c) const;
  Polynomial monic() const;
  Polynomial pow(int e) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double c, const Polynomial& a) { return a.scaled(c); }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<double> coeffs_;
};

inline double eval(const Polynomial& p, double t) { return p(t); }

/// Quotient and remainder of a / b. The remainder is trimmed relative to the
/// magnitude of `a`, so near-zero remainders collapse to the zero polynomial.
std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b,
                                         double tol = kTrimTolerance);

/// Approximate monic GCD by the Euclidean algorithm; a remainder whose
/// coefficients are all below `tol` times the dividend scale counts as zero.
Polynomial approximate_gcd(const Polynomial& a, const Polynomial& b, double tol);

struct RealRoot {
  double value;
  int multiplicity;
  friend bool operator==(const RealRoot&, const RealRoot&) = default;
};

/// Distinct real roots in ascending order with multiplicities.
///
/// Multiplicities come from Yun's square-free factorization (repeated
/// approximate GCD with the derivative, tolerance `tol`); each square-free
/// factor is solved through its companion matrix and every root receives one
/// Newton polish step on that factor.
std::vector<RealRoot> real_roots(const Polynomial& p, double tol = 1e-10);

}  // namespace curvequad
