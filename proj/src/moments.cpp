#include "curvequad/moments.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "curvequad/error.hpp"
#include "curvequad/integrate.hpp"
#include "curvequad/kernels.hpp"

namespace curvequad {

MomentVector::MomentVector(int nvars, int max_degree)
    : basis_(nvars, max_degree), values_(basis_.size(), 0.0) {}

MomentVector::MomentVector(int nvars, int max_degree, std::vector<double> values)
    : basis_(nvars, max_degree), values_(std::move(values)) {
  if (values_.size() != basis_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "moment vector needs " + std::to_string(basis_.size()) +
                                                  " values, got " + std::to_string(values_.size()));
  }
}

MomentVector MomentVector::univariate(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorKind::InvalidInput, "empty moment list");
  const int deg = static_cast<int>(values.size()) - 1;
  return MomentVector(1, deg, std::move(values));
}

double MomentVector::operator[](const MultiIndex& alpha) const {
  const auto i = basis_.index_of(alpha);
  if (i < 0) throw Error(ErrorKind::InsufficientDegree, "moment " + alpha.key() + " not available");
  return values_[static_cast<std::size_t>(i)];
}

double& MomentVector::at(const MultiIndex& alpha) {
  const auto i = basis_.index_of(alpha);
  if (i < 0) throw Error(ErrorKind::InsufficientDegree, "moment " + alpha.key() + " not available");
  return values_[static_cast<std::size_t>(i)];
}

double MomentVector::operator[](int k) const {
  if (nvars() != 1) throw Error(ErrorKind::DimensionMismatch, "univariate access on multivariate moments");
  if (k < 0 || k > max_degree()) throw Error(ErrorKind::InsufficientDegree, "moment m_" + std::to_string(k));
  return values_[static_cast<std::size_t>(k)];
}

MomentVector MomentVector::truncated(int max_degree) const {
  if (max_degree > this->max_degree()) throw Error(ErrorKind::InsufficientDegree, "truncation above available degree");
  MomentVector out(nvars(), max_degree);
  // Graded order: the smaller basis is a prefix of the larger one.
  std::copy_n(values_.begin(), out.size(), out.values().begin());
  return out;
}

double Density::operator()(double t) const {
  if (t < a || t > b) return 0.0;
  switch (name) {
    case DensityName::Uniform:
      return 1.0;
    case DensityName::Gaussian: {
      const double z = (t - mean) / sigma;
      return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
    }
    case DensityName::Tabulated: {
      auto it = std::lower_bound(table.begin(), table.end(), t,
                                 [](const auto& row, double v) { return row.first < v; });
      if (it == table.begin()) return it->second;
      if (it == table.end()) return table.back().second;
      const auto& [t1, w1] = *it;
      const auto& [t0, w0] = *(it - 1);
      return w0 + (w1 - w0) * (t - t0) / (t1 - t0);
    }
  }
  return 0.0;
}

MeasureSpec MeasureSpec::from_atoms(std::vector<Atom> atoms) {
  MeasureSpec m;
  m.kind = MeasureKind::Atoms;
  m.atoms = std::move(atoms);
  m.validate();
  return m;
}

MeasureSpec MeasureSpec::from_parameter_atoms(const std::vector<double>& t, const std::vector<double>& w) {
  if (t.size() != w.size()) throw Error(ErrorKind::DimensionMismatch, "atom locations vs weights");
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < t.size(); ++i) atoms.push_back({{t[i]}, w[i]});
  return from_atoms(std::move(atoms));
}

MeasureSpec MeasureSpec::uniform(double a, double b) {
  MeasureSpec m;
  m.kind = MeasureKind::Density;
  m.density = {DensityName::Uniform, a, b, 0.0, 1.0, {}};
  m.validate();
  return m;
}

MeasureSpec MeasureSpec::gaussian(double mean, double sigma, double a, double b) {
  MeasureSpec m;
  m.kind = MeasureKind::Density;
  m.density = {DensityName::Gaussian, a, b, mean, sigma, {}};
  m.validate();
  return m;
}

MeasureSpec MeasureSpec::from_moments(MomentVector mv) {
  MeasureSpec m;
  m.kind = MeasureKind::Raw;
  m.raw = std::move(mv);
  m.validate();
  return m;
}

int MeasureSpec::atom_dim() const {
  return atoms.empty() ? 0 : static_cast<int>(atoms.front().x.size());
}

void MeasureSpec::validate() const {
  switch (kind) {
    case MeasureKind::Atoms:
      for (const auto& a : atoms) {
        if (!(a.w > 0.0)) throw Error(ErrorKind::InvalidInput, "atom weights must be strictly positive");
        if (a.x.size() != atoms.front().x.size()) throw Error(ErrorKind::DimensionMismatch, "atoms of mixed dimension");
      }
      break;
    case MeasureKind::Density:
      if (!(density.a < density.b)) throw Error(ErrorKind::InvalidInput, "density support needs a < b");
      if (density.name == DensityName::Gaussian && !(density.sigma > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "gaussian sigma must be positive");
      }
      if (density.name == DensityName::Tabulated) {
        if (density.table.size() < 2) throw Error(ErrorKind::InvalidInput, "tabulated density needs two rows");
        for (std::size_t i = 1; i < density.table.size(); ++i) {
          if (!(density.table[i].first > density.table[i - 1].first)) {
            throw Error(ErrorKind::InvalidInput, "tabulated density abscissae must increase");
          }
        }
        for (const auto& [t, w] : density.table) {
          if (w < 0.0) throw Error(ErrorKind::InvalidInput, "tabulated density must be nonnegative");
        }
      }
      break;
    case MeasureKind::Raw:
      if (!raw) throw Error(ErrorKind::InvalidInput, "raw measure without moments");
      if (raw->mass() < 0.0) throw Error(ErrorKind::InvalidInput, "negative total mass");
      break;
  }
}

namespace {

void check_poles(const MeasureSpec& nu, const RationalCurve& curve) {
  if (curve.is_polynomial()) return;
  if (nu.kind == MeasureKind::Atoms) {
    for (const auto& a : nu.atoms) {
      if (curve.pole_distance(a.x[0]) <= 0.0 || curve.phi0()(a.x[0]) == 0.0) {
        throw Error(ErrorKind::PoleInSupport, "atom at a zero of φ₀");
      }
    }
  } else if (nu.kind == MeasureKind::Density) {
    for (double z : curve.poles()) {
      if (z >= nu.density.a - nu.pole_margin && z <= nu.density.b + nu.pole_margin) {
        throw Error(ErrorKind::PoleInSupport, "density support contains the pole t = " + std::to_string(z));
      }
    }
  }
}

}  // namespace

MomentVector curve_moments(const MeasureSpec& nu, const RationalCurve& curve, int max_degree) {
  nu.validate();
  const MonomialBasis basis(curve.n(), max_degree);
  switch (nu.kind) {
    case MeasureKind::Atoms: {
      if (nu.atom_dim() > 1) throw Error(ErrorKind::DimensionMismatch, "parameter atoms must be scalars");
      check_poles(nu, curve);
      std::vector<double> t;
      Eigen::VectorXd w(static_cast<Eigen::Index>(nu.atoms.size()));
      for (std::size_t i = 0; i < nu.atoms.size(); ++i) {
        t.push_back(nu.atoms[i].x[0]);
        w[static_cast<Eigen::Index>(i)] = nu.atoms[i].w;
      }
      const Eigen::VectorXd m = kernels::accumulate(kernels::curve_monomial_matrix(basis, curve, t), w);
      return MomentVector(curve.n(), max_degree, std::vector<double>(m.begin(), m.end()));
    }
    case MeasureKind::Density: {
      check_poles(nu, curve);
      const auto f = [&](double t, Eigen::Ref<Eigen::VectorXd> out) {
        const double rho = nu.density(t);
        const auto x = curve.point(t);
        for (std::size_t j = 0; j < basis.size(); ++j) {
          double v = rho;
          for (int k = 0; k < curve.n(); ++k) {
            for (int e = 0; e < basis[j][k]; ++e) v *= x[static_cast<std::size_t>(k)];
          }
          out[static_cast<Eigen::Index>(j)] = v;
        }
      };
      const Eigen::VectorXd m = integrate_adaptive(f, static_cast<Eigen::Index>(basis.size()),
                                                   nu.density.a, nu.density.b);
      return MomentVector(curve.n(), max_degree, std::vector<double>(m.begin(), m.end()));
    }
    case MeasureKind::Raw: {
      const MomentVector& pm = *nu.raw;
      if (pm.nvars() != 1) throw Error(ErrorKind::DimensionMismatch, "raw parameter moments must be univariate");
      if (!curve.is_polynomial()) {
        throw Error(ErrorKind::NotPolynomialParametrization,
                    "raw parameter moments can only be pushed through polynomial parametrizations");
      }
      MomentVector out(curve.n(), max_degree);
      for (std::size_t j = 0; j < basis.size(); ++j) {
        MultivariatePolynomial mono(curve.n());
        mono.add_term(basis[j], 1.0);
        const Polynomial g = compose_with_parametrization(mono, curve).numerator;
        if (g.degree() > pm.max_degree()) {
          throw Error(ErrorKind::InsufficientDegree, "parameter moments up to degree " +
                                                         std::to_string(g.degree()) + " required");
        }
        double acc = 0.0;
        for (int k = 0; k <= g.degree(); ++k) acc += g[k] * pm[k];
        out.values()[j] = acc;
      }
      return out;
    }
  }
  throw Error(ErrorKind::InvalidInput, "unknown measure kind");
}

MomentVector ambient_moments(const MeasureSpec& mu, int nvars, int max_degree) {
  mu.validate();
  if (mu.kind == MeasureKind::Raw) {
    if (mu.raw->nvars() != nvars) throw Error(ErrorKind::DimensionMismatch, "raw moments dimension");
    return mu.raw->truncated(max_degree);
  }
  if (mu.kind != MeasureKind::Atoms) {
    throw Error(ErrorKind::InvalidInput, "densities live on the parameter line; use curve_moments");
  }
  if (mu.atom_dim() != nvars && !mu.atoms.empty()) {
    throw Error(ErrorKind::DimensionMismatch, "atom dimension does not match the ambient space");
  }
  Eigen::MatrixXd nodes(nvars, static_cast<Eigen::Index>(mu.atoms.size()));
  Eigen::VectorXd w(static_cast<Eigen::Index>(mu.atoms.size()));
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    for (int k = 0; k < nvars; ++k) nodes(k, static_cast<Eigen::Index>(i)) = mu.atoms[i].x[static_cast<std::size_t>(k)];
    w[static_cast<Eigen::Index>(i)] = mu.atoms[i].w;
  }
  const MonomialBasis basis(nvars, max_degree);
  const Eigen::VectorXd m = kernels::accumulate(kernels::monomial_matrix(basis, nodes), w);
  return MomentVector(nvars, max_degree, std::vector<double>(m.begin(), m.end()));
}

MomentVector line_moments(const MeasureSpec& nu, int max_degree) {
  if (nu.kind == MeasureKind::Raw) return nu.raw->truncated(max_degree);
  const Density& rho = nu.density;
  const double c = 0.5 * (rho.a + rho.b);
  const bool symmetric = nu.kind == MeasureKind::Density &&
                         (rho.name == DensityName::Uniform || (rho.name == DensityName::Gaussian && rho.mean == c));
  if (!symmetric || max_degree < 1) return curve_moments(nu, RationalCurve::monomial({1}), max_degree);

  // Odd centered moments of a symmetric density vanish exactly; integrating
  // them numerically would leave noise that a Gauss rule then reproduces.
  nu.validate();
  const double h = 0.5 * (rho.b - rho.a);
  const int evens = max_degree / 2 + 1;
  const Eigen::VectorXd half = integrate_adaptive(
      [&](double u, Eigen::Ref<Eigen::VectorXd> out) {
        double v = 2.0 * rho(c + u);
        for (int j = 0; j < evens; ++j, v *= u * u) out[j] = v;
      },
      evens, 0.0, h);
  std::vector<double> m(static_cast<std::size_t>(max_degree) + 1);
  for (int k = 0; k <= max_degree; ++k) {
    long double acc = 0.0L, binom = 1.0L;
    for (int j = 0; j <= k; ++j) {
      if (j % 2 == 0) acc += binom * std::pow(static_cast<long double>(c), k - j) * half[j / 2];
      binom = binom * (k - j) / (j + 1);
    }
    m[static_cast<std::size_t>(k)] = static_cast<double>(acc);
  }
  return MomentVector::univariate(std::move(m));
}

MomentMatrix moment_matrix(const MomentVector& m, int k) {
  if (k < 0) throw Error(ErrorKind::InvalidInput, "negative moment-matrix degree");
  if (2 * k > m.max_degree()) {
    throw Error(ErrorKind::InsufficientDegree, "M_" + std::to_string(k) + " needs moments up to degree " +
                                                   std::to_string(2 * k));
  }
  MomentMatrix M;
  M.k = k;
  M.basis = MonomialBasis(m.nvars(), k);
  const auto n = static_cast<Eigen::Index>(M.basis.size());
  M.entries.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = m[M.basis[static_cast<std::size_t>(i)] + M.basis[static_cast<std::size_t>(j)]];
      M.entries(i, j) = v;
      M.entries(j, i) = v;
    }
  }
  return M;
}

DegeneracyResult degeneracy_test(const MomentMatrix& M, double rel_tol) {
  DegeneracyResult out;
  const auto n = M.entries.rows();
  if (n == 0) return out;
  // Rank is invariant under congruence, so equilibrate first: monomial
  // bases pushed through a curve can spread the diagonal over many orders
  // of magnitude, and a threshold relative to the top eigenvalue would
  // then swallow genuine directions.
  Eigen::VectorXd scale(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = M.entries(i, i);
    scale[i] = d > 0.0 ? 1.0 / std::sqrt(d) : 1.0;
  }
  const Eigen::MatrixXd S = scale.asDiagonal() * M.entries * scale.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
  out.eigenvalues = eig.eigenvalues();
  const double largest = out.eigenvalues.cwiseAbs().maxCoeff();
  const double cutoff = rel_tol * largest;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (largest > 0.0 && std::abs(out.eigenvalues[i]) > cutoff) {
      ++out.rank;
    } else {
      const Eigen::VectorXd v = (scale.asDiagonal() * eig.eigenvectors().col(i)).normalized();
      out.kernel.push_back(MultivariatePolynomial::from_coefficients(
          M.basis, std::span<const double>(v.data(), static_cast<std::size_t>(v.size()))));
    }
  }
  return out;
}

double psd_margin(const MomentMatrix& M) {
  if (M.entries.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M.entries, Eigen::EigenvaluesOnly);
  const double largest = eig.eigenvalues().cwiseAbs().maxCoeff();
  return largest > 0.0 ? eig.eigenvalues().minCoeff() / largest : 0.0;
}

}  // namespace curvequad
