#include "curvequad/multi_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "curvequad/error.hpp"
#include "curvequad/polynomial.hpp"

namespace curvequad {

MultiIndex::MultiIndex(std::vector<int> exponents) : exps_(std::move(exponents)) {
  for (int e : exps_) {
    if (e < 0) throw Error(ErrorKind::InvalidInput, "negative exponent in multi-index");
    order_ += e;
  }
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.nvars() != nvars()) throw Error(ErrorKind::DimensionMismatch, "multi-index sum");
  std::vector<int> e(exps_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exps_[i];
  return MultiIndex(std::move(e));
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const {
  if (auto c = order_ <=> other.order_; c != 0) return c;
  // Larger leading exponent sorts first, hence the reversed comparison.
  return other.exps_ <=> exps_;
}

std::string MultiIndex::key() const {
  std::string s = "(";
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(exps_[i]);
  }
  return s + ")";
}

MultiIndex MultiIndex::parse_key(const std::string& key) {
  std::string body = key;
  std::erase_if(body, [](char c) { return c == '(' || c == ')' || c == ' '; });
  std::vector<int> e;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      e.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, "malformed multi-index key '" + key + "'");
    }
  }
  if (e.empty()) throw Error(ErrorKind::InvalidInput, "empty multi-index key");
  return MultiIndex(std::move(e));
}

namespace {

void enumerate_degree(int nvars, int degree, std::vector<int>& prefix, std::vector<MultiIndex>& out) {
  const int used = std::accumulate(prefix.begin(), prefix.end(), 0);
  if (static_cast<int>(prefix.size()) == nvars - 1) {
    prefix.push_back(degree - used);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int e = degree - used; e >= 0; --e) {
    prefix.push_back(e);
    enumerate_degree(nvars, degree, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

MonomialBasis::MonomialBasis(int nvars, int max_degree) : nvars_(nvars), max_degree_(max_degree) {
  if (nvars < 1) throw Error(ErrorKind::InvalidInput, "monomial basis needs at least one variable");
  if (max_degree < 0) throw Error(ErrorKind::InvalidInput, "negative basis degree");
  std::vector<int> prefix;
  for (int k = 0; k <= max_degree; ++k) enumerate_degree(nvars, k, prefix, terms_);
  for (std::size_t i = 0; i < terms_.size(); ++i) lookup_.emplace(terms_[i].exponents(), i);
}

std::ptrdiff_t MonomialBasis::index_of(const MultiIndex& alpha) const {
  auto it = lookup_.find(alpha.exponents());
  return it == lookup_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

long long monomial_count(int nvars, int max_degree) {
  // binom(n + k, k) computed incrementally; exact for the sizes used here.
  long long c = 1;
  for (int i = 1; i <= max_degree; ++i) c = c * (nvars + i) / i;
  return c;
}

int MultivariatePolynomial::degree() const noexcept {
  int d = 0;
  for (const auto& [alpha, c] : terms_) d = std::max(d, alpha.order());
  return d;
}

void MultivariatePolynomial::add_term(const MultiIndex& alpha, double c) {
  if (alpha.nvars() != nvars_) throw Error(ErrorKind::DimensionMismatch, "term has wrong arity");
  double& slot = terms_[alpha];
  const double before = std::max(std::abs(slot), std::abs(c));
  slot += c;
  if (std::abs(slot) <= kTrimTolerance * before || slot == 0.0) terms_.erase(alpha);
}

double MultivariatePolynomial::coeff(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? 0.0 : it->second;
}

double MultivariatePolynomial::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != nvars_) throw Error(ErrorKind::DimensionMismatch, "evaluation point");
  double acc = 0.0;
  for (const auto& [alpha, c] : terms_) {
    double term = c;
    for (int i = 0; i < nvars_; ++i) {
      for (int k = 0; k < alpha[i]; ++k) term *= x[static_cast<std::size_t>(i)];
    }
    acc += term;
  }
  return acc;
}

MultivariatePolynomial MultivariatePolynomial::partial(int var) const {
  MultivariatePolynomial out(nvars_);
  for (const auto& [alpha, c] : terms_) {
    if (alpha[var] == 0) continue;
    std::vector<int> e = alpha.exponents();
    const int k = e[static_cast<std::size_t>(var)]--;
    out.add_term(MultiIndex(std::move(e)), c * k);
  }
  return out;
}

MultivariatePolynomial MultivariatePolynomial::homogeneous_part(int degree) const {
  MultivariatePolynomial out(nvars_);
  for (const auto& [alpha, c] : terms_) {
    if (alpha.order() == degree) out.add_term(alpha, c);
  }
  return out;
}

MultivariatePolynomial MultivariatePolynomial::scaled(double c) const {
  MultivariatePolynomial out(nvars_);
  for (const auto& [alpha, v] : terms_) out.add_term(alpha, c * v);
  return out;
}

MultivariatePolynomial operator+(const MultivariatePolynomial& a, const MultivariatePolynomial& b) {
  if (a.nvars_ != b.nvars_) throw Error(ErrorKind::DimensionMismatch, "polynomial sum");
  MultivariatePolynomial out = a;
  for (const auto& [alpha, c] : b.terms_) out.add_term(alpha, c);
  return out;
}

std::vector<double> MultivariatePolynomial::coefficients_in(const MonomialBasis& basis) const {
  std::vector<double> v(basis.size(), 0.0);
  for (const auto& [alpha, c] : terms_) {
    const auto i = basis.index_of(alpha);
    if (i >= 0) v[static_cast<std::size_t>(i)] = c;
  }
  return v;
}

MultivariatePolynomial MultivariatePolynomial::from_coefficients(const MonomialBasis& basis,
                                                                 std::span<const double> coeffs) {
  if (coeffs.size() != basis.size()) throw Error(ErrorKind::DimensionMismatch, "coefficient vector");
  MultivariatePolynomial p(basis.nvars());
  double scale = 0.0;
  for (double c : coeffs) scale = std::max(scale, std::abs(c));
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (std::abs(coeffs[i]) > kTrimTolerance * scale) p.add_term(basis[i], coeffs[i]);
  }
  return p;
}

}  // namespace curvequad
