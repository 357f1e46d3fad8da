#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace curvequad {

/// Exponent vector of a monomial x^α.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);

  int nvars() const noexcept { return static_cast<int>(exps_.size()); }
  int order() const noexcept { return order_; }
  int operator[](int i) const { return exps_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& exponents() const noexcept { return exps_; }

  MultiIndex operator+(const MultiIndex& other) const;

  /// Graded lexicographic order: total degree first, then the larger leading
  /// exponent first (x^2, xy, y^2 within degree two).
  std::strong_ordering operator<=>(const MultiIndex& other) const;
  bool operator==(const MultiIndex& other) const { return exps_ == other.exps_; }

  /// "(a,b,c)" key form used by the raw-moment JSON schema.
  std::string key() const;
  static MultiIndex parse_key(const std::string& key);

 private:
  std::vector<int> exps_;
  int order_ = 0;
};

/// All monomials in `nvars` variables of total degree ≤ `max_degree`, in
/// graded lexicographic order. This ordering is shared by moment vectors,
/// moment matrices and the ψ matrix.
class MonomialBasis {
 public:
  MonomialBasis(int nvars, int max_degree);

  int nvars() const noexcept { return nvars_; }
  int max_degree() const noexcept { return max_degree_; }
  std::size_t size() const noexcept { return terms_.size(); }
  const MultiIndex& operator[](std::size_t i) const { return terms_[i]; }
  const std::vector<MultiIndex>& terms() const noexcept { return terms_; }

  /// Position of α, or -1 when α is not in the basis.
  std::ptrdiff_t index_of(const MultiIndex& alpha) const;

  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

 private:
  int nvars_;
  int max_degree_;
  std::vector<MultiIndex> terms_;
  std::map<std::vector<int>, std::size_t> lookup_;
};

/// binom(n + k, k): number of monomials of degree ≤ k in n variables.
long long monomial_count(int nvars, int max_degree);

/// Sparse real polynomial in `nvars` variables stored as a term map.
class MultivariatePolynomial {
 public:
  explicit MultivariatePolynomial(int nvars) : nvars_(nvars) {}

  int nvars() const noexcept { return nvars_; }
  int degree() const noexcept;
  bool is_zero() const noexcept { return terms_.empty(); }
  const std::map<MultiIndex, double>& terms() const noexcept { return terms_; }

  /// Adds c·x^α; terms whose accumulated magnitude falls to the trim
  /// tolerance are removed.
  void add_term(const MultiIndex& alpha, double c);
  double coeff(const MultiIndex& alpha) const;

  double operator()(std::span<const double> x) const;
  /// Gradient component ∂/∂x_var.
  MultivariatePolynomial partial(int var) const;
  /// Homogeneous part of the given degree.
  MultivariatePolynomial homogeneous_part(int degree) const;

  MultivariatePolynomial scaled(double c) const;
  friend MultivariatePolynomial operator+(const MultivariatePolynomial& a,
                                          const MultivariatePolynomial& b);

  /// Coefficient vector against a basis (entries absent from the basis are
  /// ignored) and the inverse mapping.
  std::vector<double> coefficients_in(const MonomialBasis& basis) const;
  static MultivariatePolynomial from_coefficients(const MonomialBasis& basis,
                                                  std::span<const double> coeffs);

 private:
  int nvars_;
  std::map<MultiIndex, double> terms_;
};

}  // namespace curvequad
