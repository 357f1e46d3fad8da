#include "curvequad/gauss.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "curvequad/error.hpp"

namespace curvequad {
namespace {

using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

struct RecurrenceOutcome {
  Recurrence rec;
  int degenerate_depth = -1;  // -1: nondegenerate to the requested length
  // The same recurrence for the centered and scaled variable (t − center)/sigma,
  // kept in extended precision, with the normalized moments it came from.
  long double m0 = 0.0L, center = 0.0L, sigma = 1.0L;
  std::vector<long double> a, b;
  LongVector mu;
};

RecurrenceOutcome compute_recurrence(std::span<const double> m, int ell, double tol) {
  if (ell < 1) throw Error(ErrorKind::InvalidInput, "recurrence length must be at least 1");
  if (static_cast<int>(m.size()) < 2 * ell) {
    throw Error(ErrorKind::InsufficientDegree, "recurrence of length " + std::to_string(ell) +
                                                   " needs moments up to degree " + std::to_string(2 * ell - 1));
  }
  RecurrenceOutcome out;
  const long double m0 = m[0];
  if (!(m0 > 0.0L)) {
    out.degenerate_depth = 0;
    return out;
  }

  // Center at the mean and scale by the standard deviation before forming
  // the Hankel matrix; this removes most of the monomial-basis conditioning.
  const long double center = m[1] / m0;
  long double sigma = 1.0L;
  if (ell >= 2) {
    const long double second = m[2] / m0;
    const long double var = second - center * center;
    if (!(var > tol * std::max(second, 1e-300L))) {
      // Zero variance: a single atom at the mean.
      out.rec.a.push_back(static_cast<double>(center));
      out.rec.b.push_back(static_cast<double>(m0));
      out.degenerate_depth = 1;
      out.m0 = m0;
      out.center = center;
      out.a = {0.0L};
      return out;
    }
    sigma = std::sqrt(var);
  }
  const int top = 2 * ell - 1;
  LongVector mu(top + 1);
  for (int k = 0; k <= top; ++k) {
    long double acc = 0.0L, binom = 1.0L, shift = 1.0L;
    // Σ_j C(k,j) m_j (−c)^{k−j}, accumulated from j = k downward.
    for (int j = k; j >= 0; --j) {
      acc += binom * shift * static_cast<long double>(m[static_cast<std::size_t>(j)]);
      binom = binom * j / (k - j + 1);
      shift *= -center;
    }
    mu[k] = acc / (m0 * std::pow(sigma, static_cast<long double>(k)));
  }

  // Upper Cholesky factor R of the ℓ×ℓ Hankel matrix plus one extra column.
  LongMatrix R = LongMatrix::Zero(ell, ell + 1);
  std::vector<long double> alpha, beta;
  for (int i = 0; i < ell; ++i) {
    for (int j = i; j <= ell; ++j) {
      long double s = mu[i + j];
      for (int k = 0; k < i; ++k) s -= R(k, i) * R(k, j);
      if (j == i) {
        if (!(s > tol * std::max(mu[2 * i], 1e-300L))) {
          out.degenerate_depth = i;
          break;
        }
        R(i, i) = std::sqrt(s);
      } else {
        R(i, j) = s / R(i, i);
      }
    }
    if (out.degenerate_depth >= 0) break;
    const long double prev = i > 0 ? R(i - 1, i) / R(i - 1, i - 1) : 0.0L;
    alpha.push_back(R(i, i + 1) / R(i, i) - prev);
    if (i > 0) beta.push_back((R(i, i) / R(i - 1, i - 1)) * (R(i, i) / R(i - 1, i - 1)));
  }

  // A row that failed its pivot still contributed its α through R(i−1, i);
  // the recurrence of a depth-d measure is exactly α_0..α_{d−1}, β_1..β_{d−1}.
  out.m0 = m0;
  out.center = center;
  out.sigma = sigma;
  out.a = alpha;
  out.b = beta;
  out.mu = mu;
  out.rec.a.reserve(alpha.size());
  out.rec.b.push_back(static_cast<double>(m0));
  for (long double a : alpha) out.rec.a.push_back(static_cast<double>(center + sigma * a));
  for (long double b : beta) out.rec.b.push_back(static_cast<double>(sigma * sigma * b));
  return out;
}

// Nodes and weights of a Jacobi matrix, computed in extended precision.
void jacobi_eigen(const std::vector<long double>& a, const std::vector<long double>& offdiag_sq, LongVector& y,
                  LongVector& v) {
  const auto n = static_cast<Eigen::Index>(a.size());
  LongVector diag(n), sub(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index k = 0; k < n; ++k) diag[k] = a[static_cast<std::size_t>(k)];
  for (Eigen::Index k = 1; k < n; ++k) sub[k - 1] = std::sqrt(offdiag_sq[static_cast<std::size_t>(k - 1)]);
  Eigen::SelfAdjointEigenSolver<LongMatrix> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (eig.info() != Eigen::Success) throw Error(ErrorKind::NumericalStall, "Jacobi eigen-decomposition failed");
  y = eig.eigenvalues();
  v = eig.eigenvectors().row(0).transpose().cwiseAbs2();
}

QuadratureRule jacobi_rule(const Recurrence& rec, int strength) {
  QuadratureRule rule;
  rule.strength = strength;
  rule.provenance = Provenance::Gauss;
  const int n = rec.length();
  rule.nodes.resize(1, n);
  rule.weights.resize(n);
  if (n == 0) return rule;
  std::vector<long double> a(rec.a.begin(), rec.a.end()), b(rec.b.begin() + 1, rec.b.begin() + n);
  LongVector y, v;
  jacobi_eigen(a, b, y, v);
  const long double mass = rec.b[0];
  for (int i = 0; i < n; ++i) {
    rule.nodes(0, i) = static_cast<double>(y[i]);
    rule.weights[i] = static_cast<double>(mass * v[i]);
  }
  return rule;
}

// Newton steps on Σ vᵢ yᵢ^k = μ_k, k < 2n, in the scaled variable. The
// eigen-decomposition leaves errors of the size of the recurrence's own
// rounding; a few steps bring the nodes to the precision of the moments.
void refine_nodes(const LongVector& mu, LongVector& y, LongVector& v) {
  const auto n = y.size();
  const Eigen::Index rows = 2 * n;
  auto residual = [&](const LongVector& yy, const LongVector& vv) {
    LongVector r(rows);
    for (Eigen::Index k = 0; k < rows; ++k) {
      long double acc = 0.0L;
      for (Eigen::Index i = 0; i < n; ++i) acc += vv[i] * std::pow(yy[i], static_cast<long double>(k));
      r[k] = acc - mu[k];
    }
    return r;
  };
  LongVector r = residual(y, v);
  for (int it = 0; it < 4; ++it) {
    LongMatrix J(rows, rows);
    for (Eigen::Index k = 0; k < rows; ++k) {
      for (Eigen::Index i = 0; i < n; ++i) {
        J(k, i) = k == 0 ? 0.0L : v[i] * k * std::pow(y[i], static_cast<long double>(k - 1));
        J(k, n + i) = std::pow(y[i], static_cast<long double>(k));
      }
    }
    const LongVector d = J.fullPivLu().solve(-r);
    const LongVector y1 = y + d.head(n), v1 = v + d.tail(n);
    if (!(v1.minCoeff() > 0.0L)) break;
    const LongVector r1 = residual(y1, v1);
    if (!(r1.cwiseAbs().maxCoeff() < r.cwiseAbs().maxCoeff())) break;
    y = y1;
    v = v1;
    r = r1;
  }
}

}  // namespace

Polynomial Recurrence::orthogonal_polynomial(int k) const {
  if (k < 0 || k > length()) throw Error(ErrorKind::InsufficientDegree, "orthogonal polynomial degree");
  Polynomial prev = Polynomial::constant(1.0);
  if (k == 0) return prev;
  Polynomial cur = Polynomial({-a[0], 1.0});
  for (int j = 1; j < k; ++j) {
    Polynomial next = Polynomial({-a[static_cast<std::size_t>(j)], 1.0}) * cur -
                      prev.scaled(b[static_cast<std::size_t>(j)]);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

std::vector<double> Recurrence::moments() const {
  const int n = length();
  std::vector<double> out;
  if (n == 0) return out;
  // m_k = m_0 · e₁ᵀ J^k e₁ for k ≤ 2n − 1.
  LongVector v = LongVector::Zero(n);
  v[0] = 1.0L;
  for (int k = 0; k <= 2 * n - 1; ++k) {
    out.push_back(static_cast<double>(static_cast<long double>(b[0]) * v[0]));
    LongVector next = LongVector::Zero(n);
    for (int i = 0; i < n; ++i) {
      next[i] += a[static_cast<std::size_t>(i)] * v[i];
      if (i + 1 < n) {
        const long double off = std::sqrt(static_cast<long double>(b[static_cast<std::size_t>(i + 1)]));
        next[i] += off * v[i + 1];
        next[i + 1] += off * v[i];
      }
    }
    v = next;
  }
  return out;
}

Recurrence recurrence_from_moments(std::span<const double> m, int ell, const GaussOptions& opts) {
  auto outcome = compute_recurrence(m, ell, opts.degeneracy_tol);
  if (outcome.degenerate_depth >= 0) throw DegenerateMeasure(outcome.degenerate_depth);
  return outcome.rec;
}

Recurrence recurrence_from_moments(const MomentVector& m, int ell, const GaussOptions& opts) {
  if (m.nvars() != 1) throw Error(ErrorKind::DimensionMismatch, "recurrence needs univariate moments");
  return recurrence_from_moments(std::span<const double>(m.values()), ell, opts);
}

QuadratureRule rule_from_recurrence(const Recurrence& rec, int strength) { return jacobi_rule(rec, strength); }

QuadratureRule gauss_rule(std::span<const double> m, int strength, const GaussOptions& opts) {
  if (strength < 0) throw Error(ErrorKind::InvalidInput, "negative strength");
  const int ell = minimal_nodes(strength);
  auto outcome = compute_recurrence(m, ell, opts.degeneracy_tol);
  int n = ell;
  if (outcome.degenerate_depth >= 0) {
    if (!opts.recover_degenerate) throw DegenerateMeasure(outcome.degenerate_depth);
    n = outcome.degenerate_depth;
  }
  QuadratureRule rule;
  rule.strength = strength;
  rule.provenance = Provenance::Gauss;
  rule.nodes.resize(1, n);
  rule.weights.resize(n);
  if (n == 0) return rule;
  outcome.a.resize(static_cast<std::size_t>(n));
  outcome.b.resize(static_cast<std::size_t>(n - 1));
  LongVector y, v;
  jacobi_eigen(outcome.a, outcome.b, y, v);
  if (outcome.degenerate_depth < 0 && n > 1) refine_nodes(outcome.mu, y, v);
  for (int i = 0; i < n; ++i) {
    rule.nodes(0, i) = static_cast<double>(outcome.center + outcome.sigma * y[i]);
    rule.weights[i] = static_cast<double>(outcome.m0 * v[i]);
  }
  return rule;
}

QuadratureRule gauss_rule(const MomentVector& m, int strength, const GaussOptions& opts) {
  if (m.nvars() != 1) throw Error(ErrorKind::DimensionMismatch, "gauss_rule needs univariate moments");
  const int need = gauss_moment_degree(strength);
  if (m.max_degree() < need) {
    throw Error(ErrorKind::InsufficientDegree,
                "strength " + std::to_string(strength) + " needs moments up to degree " + std::to_string(need));
  }
  return gauss_rule(std::span<const double>(m.values()).first(static_cast<std::size_t>(need) + 1), strength, opts);
}

}  // namespace curvequad
