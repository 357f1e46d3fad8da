#include "curvequad/synthesis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "curvequad/bounds.hpp"
#include "curvequad/curves.hpp"
#include "curvequad/error.hpp"
#include "curvequad/gauss.hpp"
#include "curvequad/integrate.hpp"
#include "curvequad/kernels.hpp"
#include "curvequad/optimize.hpp"

namespace curvequad {

double KKTReport::max_H() const {
  double m = 0.0;
  for (double v : H_values) m = std::max(m, v);
  return m;
}

double KKTReport::max_gradient_residual() const {
  double m = 0.0;
  for (double v : gradient_residuals) m = std::max(m, v);
  return m;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double scale_of(double m) { return std::max(1.0, std::abs(m)); }

std::vector<double> target_values(const MonomialBasis& basis, const MomentVector& m) {
  std::vector<double> out(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) out[j] = m[basis[j]];
  return out;
}

double max_rel_residual(const VectorXd& got, const std::vector<double>& target) {
  double r = 0.0;
  for (std::size_t j = 0; j < target.size(); ++j) {
    r = std::max(r, std::abs(got[static_cast<Eigen::Index>(j)] - target[j]) / scale_of(target[j]));
  }
  return r;
}

double rule_residual(const QuadratureRule& rule, const MomentVector& m, int strength) {
  const MonomialBasis basis(m.nvars(), strength);
  if (rule.size() == 0) {
    double r = 0.0;
    for (const auto& a : basis) r = std::max(r, std::abs(m[a]) / scale_of(m[a]));
    return r;
  }
  const MatrixXd A = kernels::monomial_matrix(basis, rule.nodes);
  return max_rel_residual(kernels::accumulate(A, rule.weights), target_values(basis, m));
}

QuadratureRule rule_on_curve(const RationalCurve& curve, const std::vector<double>& t, const std::vector<double>& w,
                             int strength, Provenance prov) {
  QuadratureRule r;
  r.strength = strength;
  r.provenance = prov;
  r.nodes.resize(curve.n(), static_cast<Eigen::Index>(t.size()));
  r.weights.resize(static_cast<Eigen::Index>(w.size()));
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto p = curve.point(t[i]);
    for (int j = 0; j < curve.n(); ++j) r.nodes(j, static_cast<Eigen::Index>(i)) = p[static_cast<std::size_t>(j)];
    r.weights[static_cast<Eigen::Index>(i)] = w[i];
  }
  r.parameter_values = t;
  return r;
}

// Positive discrete measure on the parameter line whose moments agree with ν
// to integration accuracy: atoms as given, densities by composite
// 16-point Gauss–Legendre panels.
void discretize(const MeasureSpec& nu, int points, std::vector<double>& t, std::vector<double>& w) {
  t.clear();
  w.clear();
  if (nu.kind == MeasureKind::Atoms) {
    for (const auto& a : nu.atoms) {
      t.push_back(a.x.at(0));
      w.push_back(a.w);
    }
    return;
  }
  VectorXd gx, gw;
  gauss_legendre(16, gx, gw);
  const int panels = std::max(1, points / 16);
  const double a = nu.density.a, b = nu.density.b;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (Eigen::Index k = 0; k < gx.size(); ++k) {
      const double x = lo + 0.5 * h * (gx[k] + 1.0);
      const double wk = 0.5 * h * gw[k] * nu.density(x);
      if (wk > 0.0) {
        t.push_back(x);
        w.push_back(wk);
      }
    }
  }
}

// Nonnegative fit of sampled nodes to the target moments.
void nnls_start(const MatrixXd& A_raw, const std::vector<double>& target, VectorXd& w) {
  MatrixXd A = A_raw;
  VectorXd b(static_cast<Eigen::Index>(target.size()));
  for (std::size_t j = 0; j < target.size(); ++j) {
    const double s = scale_of(target[j]);
    A.row(static_cast<Eigen::Index>(j)) /= s;
    b[static_cast<Eigen::Index>(j)] = target[j] / s;
  }
  // Columns at far-out nodes dwarf the rest; solve in unit-norm columns.
  const VectorXd cn = A.colwise().norm().cwiseMax(1e-300);
  for (Eigen::Index i = 0; i < A.cols(); ++i) A.col(i) /= cn[i];
  VectorXd v = opt::nnls(A, b);
  // One least-squares refinement on the support, kept only if it stays positive.
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] > 0.0) support.push_back(i);
  }
  if (!support.empty()) {
    MatrixXd As(A.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t k = 0; k < support.size(); ++k) As.col(static_cast<Eigen::Index>(k)) = A.col(support[k]);
    VectorXd vs(static_cast<Eigen::Index>(support.size()));
    for (std::size_t k = 0; k < support.size(); ++k) vs[static_cast<Eigen::Index>(k)] = v[support[k]];
    const VectorXd dv = As.completeOrthogonalDecomposition().solve(b - As * vs);
    if ((vs + dv).minCoeff() > 0.0) {
      for (std::size_t k = 0; k < support.size(); ++k) v[support[k]] += dv[static_cast<Eigen::Index>(k)];
    }
  }
  w = v.cwiseQuotient(cn);
}

// Minimizer of h on (lo, hi); h′ increases from −∞ to +∞ there.
double penalty_minimizer(const RationalCurve& curve, double lo, double hi) {
  auto hp = [&](double t) { return rational_penalty_derivative(curve, t); };
  double a = std::isfinite(lo) ? lo : std::min(-1.0, hi - 1.0);
  double b = std::isfinite(hi) ? hi : std::max(1.0, lo + 1.0);
  if (!std::isfinite(lo)) {
    while (hp(a) > 0.0) a = 2.0 * a - 1.0;
  }
  if (!std::isfinite(hi)) {
    while (hp(b) < 0.0) b = 2.0 * b + 1.0;
  }
  if (std::isfinite(lo)) a = lo + 1e-12 * std::max(1.0, std::abs(lo));
  if (std::isfinite(hi)) b = hi - 1e-12 * std::max(1.0, std::abs(hi));
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    (hp(m) < 0.0 ? a : b) = m;
  }
  return 0.5 * (a + b);
}

// Orthonormal rows spanning the moment vectors the curve can produce. Moment
// constraints on a curve satisfy the relations of its ideal, so only this
// many are independent.
MatrixXd span_rows(MatrixXd V, double rel_tol = 1e-10) {
  for (Eigen::Index j = 0; j < V.cols(); ++j) {
    const double n = V.col(j).norm();
    if (n > 0.0) V.col(j) /= n;
  }
  Eigen::BDCSVD<MatrixXd> svd(V, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::Index r = 0;
  while (r < sv.size() && sv[r] > rel_tol * sv[0]) ++r;
  return svd.matrixU().leftCols(r).transpose();
}

// span_rows over curve points sampled on the parameter line plus `extra`;
// rows are divided by the moment scales when `target` is given.
MatrixXd rational_span(const RationalCurve& curve, const MonomialBasis& basis, const std::vector<double>* target,
                       const std::vector<double>& extra, double reach) {
  const auto K = static_cast<Eigen::Index>(basis.size());
  for (double t : extra) reach = std::max(reach, std::abs(t) + 1.0);
  std::vector<double> ts = extra;
  const int M = 8 * static_cast<int>(K) + 16;
  for (int k = 0; k < M; ++k) {
    const double t = -reach + 2.0 * reach * (k + 0.5) / M;
    if (curve.pole_distance(t) >= 1e-2) ts.push_back(t);
  }
  MatrixXd V(K, static_cast<Eigen::Index>(ts.size()));
  std::vector<double> vals;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    curve_monomials(basis, curve, ts[i], vals);
    for (Eigen::Index j = 0; j < K; ++j) {
      const double s = target ? scale_of((*target)[static_cast<std::size_t>(j)]) : 1.0;
      V(j, static_cast<Eigen::Index>(i)) = vals[static_cast<std::size_t>(j)] / s;
    }
  }
  return span_rows(V);
}

// Replaces the first K equality rows c by Qt·c.
opt::ConstrainedProblem reduce_equalities(opt::ConstrainedProblem pb, const MatrixXd& Qt, Eigen::Index K) {
  auto full = pb.equalities;
  pb.equalities = [full, Qt, K](const VectorXd& z, MatrixXd* J) {
    MatrixXd Jf;
    const VectorXd c = full(z, J ? &Jf : nullptr);
    const Eigen::Index rest = c.size() - K;
    VectorXd out(Qt.rows() + rest);
    out.head(Qt.rows()) = Qt * c.head(K);
    out.tail(rest) = c.tail(rest);
    if (J) {
      J->resize(out.size(), z.size());
      J->topRows(Qt.rows()) = Qt * Jf.topRows(K);
      J->bottomRows(rest) = Jf.bottomRows(rest);
    }
    return out;
  };
  return pb;
}

}  // namespace

double rational_penalty(const RationalCurve& curve, double t) {
  double h = t * t;
  for (double z : curve.poles()) h += 1.0 / ((t - z) * (t - z));
  return h;
}

double rational_penalty_derivative(const RationalCurve& curve, double t) {
  double h = 2.0 * t;
  for (double z : curve.poles()) {
    const double d = t - z;
    h -= 2.0 / (d * d * d);
  }
  return h;
}

int rational_target_nodes(const RationalCurve& curve, int strength) {
  const int s = half_strength(strength);
  return static_cast<int>(strength % 2 == 1 ? rational_odd_bound(curve.D(), s, curve.p_real_zeros())
                                            : rational_even_bound(curve.D(), s, curve.p_real_zeros()));
}

int plane_target_nodes(const PlaneCurve& curve, int strength) {
  // Even strengths are served by the odd program one degree higher.
  const int s = strength % 2 == 1 ? (strength + 1) / 2 : strength / 2 + 1;
  return static_cast<int>(plane_bound(curve.degree(), s, places_at_infinity(curve)));
}

// ---------------------------------------------------------------------------

SynthesisResult pullback_gauss(const RationalCurve& curve, const MeasureSpec& nu, int strength) {
  if (!curve.is_polynomial()) {
    throw Error(ErrorKind::NotPolynomialParametrization, "pullback needs a polynomial parametrization");
  }
  if (strength < 0) throw Error(ErrorKind::InvalidInput, "negative strength");
  const int m = strength * curve.D();
  const MomentVector lm = line_moments(nu, gauss_moment_degree(m));
  const QuadratureRule line = gauss_rule(lm, m);

  SynthesisResult res;
  res.method = "pullback";
  std::vector<double> t(static_cast<std::size_t>(line.size())), w(t.size());
  for (int i = 0; i < line.size(); ++i) {
    t[static_cast<std::size_t>(i)] = line.nodes(0, i);
    w[static_cast<std::size_t>(i)] = line.weights[i];
  }
  res.rule = rule_on_curve(curve, t, w, strength, Provenance::Pullback);
  res.residual = rule_residual(res.rule, curve_moments(nu, curve, strength), strength);
  res.target_nodes = minimal_nodes(m);
  res.target_met = res.rule.size() <= res.target_nodes;
  res.converged = res.residual <= 1e-8;
  res.bound_check = check_bounds(res.rule, curve, strength, lower_bound_context(curve, nu, strength));
  if (line.size() < res.target_nodes) res.message = "pulled-back measure is degenerate; returned its atoms";
  return res;
}

QuadratureRule caratheodory_prune(const QuadratureRule& in, const MomentVector& m_target, int strength,
                                  double merge_tol) {
  if (strength > m_target.max_degree()) {
    throw Error(ErrorKind::InsufficientDegree, "target moments stop below the pruning strength");
  }
  QuadratureRule r = canonicalize(in, merge_tol, 0.0);
  r.strength = strength;
  if (r.size() == 0) return r;
  if (r.dim() != m_target.nvars()) throw Error(ErrorKind::DimensionMismatch, "rule and moments dimensions differ");
  const MonomialBasis basis(r.dim(), strength);
  const std::vector<double> target = target_values(basis, m_target);
  MatrixXd A = kernels::monomial_matrix(basis, r.nodes);
  VectorXd b(A.rows());
  for (Eigen::Index j = 0; j < A.rows(); ++j) {
    const double s = scale_of(target[static_cast<std::size_t>(j)]);
    A.row(j) /= s;
    b[j] = target[static_cast<std::size_t>(j)] / s;
  }
  const int rank = numerical_rank(A);
  if (r.size() <= rank) return r;

  std::vector<Eigen::Index> alive(static_cast<std::size_t>(r.size()));
  std::iota(alive.begin(), alive.end(), 0);
  VectorXd w = r.weights;
  const double mass = w.sum();
  while (static_cast<int>(alive.size()) > rank) {
    // The window grows when its columns are independent at the null-vector
    // threshold, which happens when the global rank was decided on a looser one.
    int m = rank + 1;
    double ratio = 0.0;
    VectorXd v;
    for (;; ++m) {
      MatrixXd sub(A.rows(), m);
      for (int k = 0; k < m; ++k) sub.col(k) = A.col(alive[static_cast<std::size_t>(k)]);
      v = opt::null_vector(sub, &ratio);
      if (ratio <= 1e-6 || m == static_cast<int>(alive.size())) break;
    }
    if (ratio > 1e-6) {
      if (m > A.rows()) throw Error(ErrorKind::NumericalStall, "no null direction among " + std::to_string(m) + " nodes");
      break;  // the survivors are independent at this threshold
    }
    if (v.maxCoeff() <= 0.0) v = -v;
    double theta = std::numeric_limits<double>::infinity();
    int hit = -1;
    for (int k = 0; k < m; ++k) {
      if (v[k] > 0.0) {
        const double q = w[alive[static_cast<std::size_t>(k)]] / v[k];
        if (q < theta) theta = q, hit = k;
      }
    }
    for (int k = 0; k < m; ++k) w[alive[static_cast<std::size_t>(k)]] -= theta * v[k];
    w[alive[static_cast<std::size_t>(hit)]] = 0.0;
    std::vector<Eigen::Index> next;
    for (auto i : alive) {
      if (w[i] > 1e-15 * mass) next.push_back(i);
    }
    alive = std::move(next);
  }

  // Least-squares polish of the surviving weights when it keeps them positive.
  MatrixXd As(A.rows(), static_cast<Eigen::Index>(alive.size()));
  VectorXd ws(static_cast<Eigen::Index>(alive.size()));
  for (std::size_t k = 0; k < alive.size(); ++k) {
    As.col(static_cast<Eigen::Index>(k)) = A.col(alive[k]);
    ws[static_cast<Eigen::Index>(k)] = w[alive[k]];
  }
  const VectorXd ls = As.colPivHouseholderQr().solve(b);
  if (ls.minCoeff() > 0.0 && (As * ls - b).lpNorm<Eigen::Infinity>() < (As * ws - b).lpNorm<Eigen::Infinity>()) {
    ws = ls;
  }

  QuadratureRule out;
  out.strength = strength;
  out.provenance = Provenance::Pruned;
  out.nodes.resize(r.dim(), static_cast<Eigen::Index>(alive.size()));
  out.weights = ws;
  const bool has_t = r.parameter_values.size() == static_cast<std::size_t>(r.size());
  for (std::size_t k = 0; k < alive.size(); ++k) {
    out.nodes.col(static_cast<Eigen::Index>(k)) = r.nodes.col(alive[k]);
    if (has_t) out.parameter_values.push_back(r.parameter_values[static_cast<std::size_t>(alive[k])]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rational program.

namespace {

struct RationalProgram {
  const RationalCurve& curve;
  const MonomialBasis& basis;
  const std::vector<double>& target;
  double pole_margin;

  int nodes(const VectorXd& z) const { return static_cast<int>(z.size() / 2); }

  opt::ConstrainedProblem problem() const {
    opt::ConstrainedProblem pb;
    pb.objective = [this](const VectorXd& z, VectorXd* g) {
      const int N = nodes(z);
      double f = 0.0;
      if (g) g->setZero(z.size());
      for (int i = 0; i < N; ++i) {
        f += rational_penalty(curve, z[i]);
        if (g) (*g)[i] = rational_penalty_derivative(curve, z[i]);
      }
      return f;
    };
    pb.equalities = [this](const VectorXd& z, MatrixXd* J) {
      const int N = nodes(z);
      const auto K = static_cast<Eigen::Index>(basis.size());
      VectorXd c = VectorXd::Zero(K);
      if (J) J->setZero(K, z.size());
      std::vector<double> vals, ders;
      for (int i = 0; i < N; ++i) {
        const double u = z[N + i];
        curve_monomials(basis, curve, z[i], vals, J ? &ders : nullptr);
        for (Eigen::Index j = 0; j < K; ++j) {
          const double s = scale_of(target[static_cast<std::size_t>(j)]);
          c[j] += u * u * vals[static_cast<std::size_t>(j)] / s;
          if (J) {
            (*J)(j, i) = u * u * ders[static_cast<std::size_t>(j)] / s;
            (*J)(j, N + i) = 2.0 * u * vals[static_cast<std::size_t>(j)] / s;
          }
        }
      }
      for (Eigen::Index j = 0; j < K; ++j) {
        c[j] -= target[static_cast<std::size_t>(j)] / scale_of(target[static_cast<std::size_t>(j)]);
      }
      return c;
    };
    pb.admissible = [this](const VectorXd& z) {
      const int N = nodes(z);
      for (int i = 0; i < N; ++i) {
        if (!std::isfinite(z[i]) || curve.pole_distance(z[i]) < pole_margin) return false;
      }
      return z.allFinite();
    };
    return pb;
  }
};

VectorXd pack(const std::vector<double>& t, const std::vector<double>& w) {
  const auto N = static_cast<Eigen::Index>(t.size());
  VectorXd z(2 * N);
  for (Eigen::Index i = 0; i < N; ++i) {
    z[i] = t[static_cast<std::size_t>(i)];
    z[N + i] = std::sqrt(std::max(w[static_cast<std::size_t>(i)], 0.0));
  }
  return z;
}

void unpack(const VectorXd& z, std::vector<double>& t, std::vector<double>& w) {
  const auto N = z.size() / 2;
  t.resize(static_cast<std::size_t>(N));
  w.resize(static_cast<std::size_t>(N));
  for (Eigen::Index i = 0; i < N; ++i) {
    t[static_cast<std::size_t>(i)] = z[i];
    w[static_cast<std::size_t>(i)] = z[N + i] * z[N + i];
  }
}

// Feasible-path descent from z0; an infeasible start is first moved near the
// constraint set by the augmented Lagrangian. Success means the unreduced
// moment residual is within ok_tol.
bool run_program(const opt::ConstrainedProblem& pb, const opt::ConstrainedProblem& full, const VectorXd& z0,
                 const opt::AlOptions& ao, double ok_tol, VectorXd& z, int& iterations) {
  opt::DescentResult dr = opt::feasible_descent(pb, z0);
  iterations += dr.iters;
  if (!dr.feasible) {
    const opt::AlResult al = opt::augmented_lagrangian(pb, z0, ao);
    iterations += al.outer_iters;
    dr = opt::feasible_descent(pb, al.x);
    iterations += dr.iters;
    if (!dr.feasible) return false;
  }
  z = dr.x;
  opt::polish_feasibility(full, z, 1e-15);
  return full.equalities(z, nullptr).lpNorm<Eigen::Infinity>() <= ok_tol;
}

}  // namespace

QuadratureRule initial_rule(const RationalCurve& curve, const MomentVector& m_target, int strength,
                            const NLPConfig& cfg, const MeasureSpec* nu) {
  if (m_target.nvars() != curve.n()) throw Error(ErrorKind::DimensionMismatch, "moments and curve dimensions differ");
  if (m_target.max_degree() < strength) throw Error(ErrorKind::InsufficientDegree, "target moments below strength");
  const MonomialBasis basis(curve.n(), strength);
  const std::vector<double> target = target_values(basis, m_target);
  std::vector<double> t0, w0;
  if (nu && nu->kind != MeasureKind::Raw) {
    discretize(*nu, cfg.max_nodes_init, t0, w0);
  } else {
    std::mt19937_64 rng(cfg.seed);
    const double offset = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const int M = std::max(cfg.max_nodes_init, 8);
    std::vector<double> grid;
    for (int k = 0; k < M; ++k) {
      const double t = -cfg.parameter_range + 2.0 * cfg.parameter_range * (k + offset) / M;
      if (curve.pole_distance(t) >= std::max(10.0 * cfg.pole_margin, 1e-2)) grid.push_back(t);
    }
    MatrixXd A(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(grid.size()));
    std::vector<double> vals;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      curve_monomials(basis, curve, grid[i], vals);
      for (std::size_t j = 0; j < vals.size(); ++j) A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = vals[j];
    }
    VectorXd w;
    nnls_start(A, target, w);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (w[static_cast<Eigen::Index>(i)] > 0.0) t0.push_back(grid[i]), w0.push_back(w[static_cast<Eigen::Index>(i)]);
    }
  }
  for (double t : t0) {
    if (curve.pole_distance(t) < cfg.pole_margin) throw Error(ErrorKind::PoleInSupport, "start node within pole margin");
  }
  QuadratureRule start = rule_on_curve(curve, t0, w0, strength, Provenance::Pruned);
  if (rule_residual(start, m_target, strength) > std::max(1e-9, cfg.exactness_tol)) {
    throw Error(ErrorKind::InfeasibleStart, "initial rule does not match the target moments");
  }
  return caratheodory_prune(start, m_target, strength, cfg.merge_tol);
}

SynthesisResult nlp_rational(const RationalCurve& curve, const MomentVector& m_target, int strength,
                             const NLPConfig& cfg, const MeasureSpec* nu) {
  if (m_target.nvars() != curve.n()) throw Error(ErrorKind::DimensionMismatch, "moments and curve dimensions differ");
  if (m_target.max_degree() < strength) throw Error(ErrorKind::InsufficientDegree, "target moments below strength");
  const MonomialBasis basis(curve.n(), strength);
  const std::vector<double> target = target_values(basis, m_target);
  const double mass = m_target.mass();

  const QuadratureRule start = initial_rule(curve, m_target, strength, cfg, nu);

  SynthesisResult res;
  res.method = "nlp-rational";
  res.target_nodes = rational_target_nodes(curve, strength);

  const RationalProgram prog{curve, basis, target, cfg.pole_margin};
  const opt::ConstrainedProblem full = prog.problem();
  const auto K = static_cast<Eigen::Index>(basis.size());
  opt::ConstrainedProblem pb;
  pb = reduce_equalities(full, rational_span(curve, basis, &target, start.parameter_values, cfg.parameter_range), K);
  opt::AlOptions ao;
  ao.max_outer = cfg.max_outer_iters;
  ao.max_inner = cfg.max_inner_iters;
  ao.penalty_growth = cfg.penalty_growth;
  const double ok_tol = 0.1 * cfg.exactness_tol;

  auto solve = [&](std::vector<double>& t, std::vector<double>& w) -> bool {
    VectorXd z;
    if (!run_program(pb, full, pack(t, w), ao, ok_tol, z, res.outer_iterations)) return false;
    unpack(z, t, w);
    return true;
  };
  auto cleanup = [&](std::vector<double>& t, std::vector<double>& w) {
    bool changed = false;
    std::vector<std::size_t> order(t.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return t[a] < t[b]; });
    std::vector<double> nt, nw;
    for (auto i : order) {
      if (w[i] <= cfg.weight_drop_tol * mass) {
        changed = true;
        continue;
      }
      if (!nt.empty() && std::abs(t[i] - nt.back()) <= cfg.merge_tol) {
        const double tot = nw.back() + w[i];
        nt.back() = (nw.back() * nt.back() + w[i] * t[i]) / tot;
        nw.back() = tot;
        changed = true;
        continue;
      }
      nt.push_back(t[i]);
      nw.push_back(w[i]);
    }
    t = std::move(nt);
    w = std::move(nw);
    return changed;
  };

  std::vector<double> t = start.parameter_values, w(static_cast<std::size_t>(start.size()));
  for (int i = 0; i < start.size(); ++i) w[static_cast<std::size_t>(i)] = start.weights[i];
  bool solved = solve(t, w);
  if (solved) {
    for (int round = 0; round < 4 * cfg.max_drop_rounds; ++round) {
      std::vector<double> ct = t, cw = w;
      if (cleanup(ct, cw)) {
        if (!solve(ct, cw)) break;
        t = ct, w = cw;
        continue;
      }
      if (static_cast<int>(t.size()) <= res.target_nodes || round >= cfg.max_drop_rounds) break;
      // Tentative removal, lightest node first.
      std::vector<std::size_t> order(t.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return w[a] < w[b]; });
      bool dropped = false;
      for (auto victim : order) {
        if (w[victim] > 0.5 * mass) break;
        std::vector<double> tt, tw;
        for (std::size_t i = 0; i < t.size(); ++i) {
          if (i != victim) tt.push_back(t[i]), tw.push_back(w[i]);
        }
        if (solve(tt, tw)) {
          t = tt, w = tw;
          dropped = true;
          break;
        }
      }
      if (!dropped) break;
    }
  }

  if (solved) {
    res.rule = rule_on_curve(curve, t, w, strength, Provenance::NlpRational);
    res.residual = rule_residual(res.rule, m_target, strength);
    res.converged = res.residual <= cfg.exactness_tol;
  }
  if (!res.converged) {
    res.rule = start;
    res.residual = rule_residual(start, m_target, strength);
    res.message = "solver did not reach the exactness tolerance; returning the pruned start";
  }
  res.target_met = res.rule.size() <= res.target_nodes;
  if (res.converged) {
    res.kkt = kkt_analyze(res.rule, curve, strength);
    if (res.kkt.rank_deficient) res.message = "RankDeficientFit: multiplier system underdetermined, minimum-norm fit";
  }
  const LowerBoundContext ctx =
      nu && curve.is_polynomial() ? lower_bound_context(curve, *nu, strength) : LowerBoundContext{};
  res.bound_check = check_bounds(res.rule, curve, strength, ctx);
  return res;
}

// ---------------------------------------------------------------------------
// Plane program.

namespace {

struct PlaneGeometry {
  const MultivariatePolynomial& F;
  MultivariatePolynomial Fx, Fy;
  double scale;

  explicit PlaneGeometry(const MultivariatePolynomial& f) : F(f), Fx(f.partial(0)), Fy(f.partial(1)), scale(1.0) {
    for (const auto& [a, c] : f.terms()) scale = std::max(scale, std::abs(c));
  }
  double value(double x, double y) const {
    const double p[2] = {x, y};
    return F(std::span<const double>(p, 2));
  }
  std::array<double, 2> grad(double x, double y) const {
    const double p[2] = {x, y};
    return {Fx(std::span<const double>(p, 2)), Fy(std::span<const double>(p, 2))};
  }
  // Newton projection along the gradient.
  void project(double& x, double& y) const {
    for (int it = 0; it < 20; ++it) {
      const double f = value(x, y);
      if (std::abs(f) <= 1e-15 * scale) return;
      const auto g = grad(x, y);
      const double gg = g[0] * g[0] + g[1] * g[1];
      if (gg == 0.0) return;
      x -= f * g[0] / gg;
      y -= f * g[1] / gg;
    }
  }
};

std::array<double, 2> nearest_curve_point(const PlaneGeometry& geo, const PlaneCurve& c, const MatrixXd& seeds) {
  if (std::abs(geo.value(0.0, 0.0)) <= 1e-12 * geo.scale) return {0.0, 0.0};
  std::vector<std::array<double, 2>> cand;
  for (Eigen::Index i = 0; i < seeds.cols(); ++i) cand.push_back({seeds(0, i), seeds(1, i)});
  double radius = 1.0;
  for (const auto& p : cand) radius = std::max(radius, 2.0 * std::hypot(p[0], p[1]));
  const MatrixXd samples = sample_plane_curve(c, radius, 64);
  for (Eigen::Index i = 0; i < samples.cols(); ++i) cand.push_back({samples(0, i), samples(1, i)});
  if (cand.empty()) throw Error(ErrorKind::InvalidInput, "no real points found on the plane curve");
  auto best = *std::min_element(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
    return std::hypot(a[0], a[1]) < std::hypot(b[0], b[1]);
  });
  double x = best[0], y = best[1];
  geo.project(x, y);
  // Projected gradient descent on |x|² along the curve.
  for (int it = 0; it < 200; ++it) {
    const auto g = geo.grad(x, y);
    const double gn = std::hypot(g[0], g[1]);
    if (gn == 0.0) break;
    const double nx = g[0] / gn, ny = g[1] / gn;
    const double along = -x * ny + y * nx;  // component of (x, y) along the tangent (−ny, nx)
    if (std::abs(along) <= 1e-14 * std::max(1.0, std::hypot(x, y))) break;
    const double px = x + 0.5 * along * ny, py = y - 0.5 * along * nx;
    double qx = px, qy = py;
    geo.project(qx, qy);
    if (std::hypot(qx, qy) >= std::hypot(x, y)) break;
    x = qx, y = qy;
  }
  return {x, y};
}

// m'_α = ∫ (x − p)^α dμ from the unshifted moments.
MomentVector shift_moments(const MomentVector& m, std::array<double, 2> p, int strength) {
  MomentVector out(2, strength);
  std::vector<std::vector<double>> binom(static_cast<std::size_t>(strength) + 1);
  for (int a = 0; a <= strength; ++a) {
    binom[static_cast<std::size_t>(a)].assign(static_cast<std::size_t>(a) + 1, 1.0);
    for (int k = 1; k < a; ++k) {
      binom[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)] =
          binom[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(k - 1)] +
          binom[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(k)];
    }
  }
  for (const auto& alpha : out.basis()) {
    const int a = alpha[0], b = alpha[1];
    double s = 0.0;
    for (int i = 0; i <= a; ++i) {
      for (int j = 0; j <= b; ++j) {
        s += binom[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] *
             binom[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)] * m[MultiIndex({i, j})] *
             std::pow(-p[0], a - i) * std::pow(-p[1], b - j);
      }
    }
    out.at(alpha) = s;
  }
  return out;
}

struct PlaneProgram {
  const PlaneGeometry& geo;
  std::array<double, 2> base;
  std::vector<MultiIndex> alphas;  // 1 ≤ |α| ≤ strength
  std::vector<double> target;      // shifted moments
  double radius;

  static int nodes(const VectorXd& z) { return static_cast<int>(z.size() / 3); }

  opt::ConstrainedProblem problem() const {
    opt::ConstrainedProblem pb;
    pb.objective = [](const VectorXd& z, VectorXd* g) {
      const int N = nodes(z);
      double f = 0.0;
      if (g) g->setZero(z.size());
      for (int i = 0; i < N; ++i) {
        f += z[i] * z[i];
        if (g) (*g)[i] = 2.0 * z[i];
      }
      return f;
    };
    pb.equalities = [this](const VectorXd& z, MatrixXd* J) {
      const int N = nodes(z);
      const auto K = static_cast<Eigen::Index>(alphas.size());
      VectorXd c = VectorXd::Zero(K + N);
      if (J) J->setZero(K + N, z.size());
      for (int i = 0; i < N; ++i) {
        const double u = z[i], X = z[N + i], Y = z[2 * N + i];
        for (Eigen::Index k = 0; k < K; ++k) {
          const int a = alphas[static_cast<std::size_t>(k)][0], b = alphas[static_cast<std::size_t>(k)][1];
          const double s = scale_of(target[static_cast<std::size_t>(k)]);
          const double mono = std::pow(X, a) * std::pow(Y, b);
          c[k] += u * u * mono / s;
          if (J) {
            (*J)(k, i) = 2.0 * u * mono / s;
            (*J)(k, N + i) = a > 0 ? u * u * a * std::pow(X, a - 1) * std::pow(Y, b) / s : 0.0;
            (*J)(k, 2 * N + i) = b > 0 ? u * u * b * std::pow(X, a) * std::pow(Y, b - 1) / s : 0.0;
          }
        }
        c[K + i] = geo.value(X + base[0], Y + base[1]) / geo.scale;
        if (J) {
          const auto g = geo.grad(X + base[0], Y + base[1]);
          (*J)(K + i, N + i) = g[0] / geo.scale;
          (*J)(K + i, 2 * N + i) = g[1] / geo.scale;
        }
      }
      for (Eigen::Index k = 0; k < K; ++k) {
        c[k] -= target[static_cast<std::size_t>(k)] / scale_of(target[static_cast<std::size_t>(k)]);
      }
      return c;
    };
    pb.inequalities = [this](const VectorXd& z, MatrixXd* J) {
      const int N = nodes(z);
      VectorXd g(N);
      if (J) J->setZero(N, z.size());
      const double r2 = radius * radius;
      for (int i = 0; i < N; ++i) {
        const double x = z[N + i] + base[0], y = z[2 * N + i] + base[1];
        g[i] = (x * x + y * y - r2) / r2;
        if (J) {
          (*J)(i, N + i) = 2.0 * x / r2;
          (*J)(i, 2 * N + i) = 2.0 * y / r2;
        }
      }
      return g;
    };
    pb.project = [this](VectorXd& z) {
      const int N = nodes(z);
      for (int i = 0; i < N; ++i) {
        double x = z[N + i] + base[0], y = z[2 * N + i] + base[1];
        geo.project(x, y);
        z[N + i] = x - base[0];
        z[2 * N + i] = y - base[1];
      }
    };
    return pb;
  }
};

struct PlaneNodes {
  std::vector<double> w, X, Y;  // shifted coordinates
  std::size_t size() const { return w.size(); }
};

VectorXd pack(const PlaneNodes& n) {
  const auto N = static_cast<Eigen::Index>(n.size());
  VectorXd z(3 * N);
  for (Eigen::Index i = 0; i < N; ++i) {
    z[i] = std::sqrt(std::max(n.w[static_cast<std::size_t>(i)], 0.0));
    z[N + i] = n.X[static_cast<std::size_t>(i)];
    z[2 * N + i] = n.Y[static_cast<std::size_t>(i)];
  }
  return z;
}

PlaneNodes unpack_plane(const VectorXd& z) {
  const auto N = z.size() / 3;
  PlaneNodes n;
  for (Eigen::Index i = 0; i < N; ++i) {
    n.w.push_back(z[i] * z[i]);
    n.X.push_back(z[N + i]);
    n.Y.push_back(z[2 * N + i]);
  }
  return n;
}

}  // namespace

QuadratureRule initial_rule(const PlaneCurve& curve, const MomentVector& m_target, int strength, const NLPConfig& cfg,
                            const MeasureSpec* mu) {
  if (m_target.nvars() != 2) throw Error(ErrorKind::DimensionMismatch, "plane program needs bivariate moments");
  if (m_target.max_degree() < strength) throw Error(ErrorKind::InsufficientDegree, "target moments below strength");
  const double mass = m_target.mass();
  const MonomialBasis basis(2, strength);
  const std::vector<double> full_target = target_values(basis, m_target);
  // Feasible start: the measure's atoms, or an NNLS fit on sampled curve points.
  QuadratureRule start;
  start.strength = strength;
  start.provenance = Provenance::Pruned;
  if (mu && mu->kind == MeasureKind::Atoms) {
    start.nodes.resize(2, static_cast<Eigen::Index>(mu->atoms.size()));
    start.weights.resize(static_cast<Eigen::Index>(mu->atoms.size()));
    for (std::size_t i = 0; i < mu->atoms.size(); ++i) {
      start.nodes(0, static_cast<Eigen::Index>(i)) = mu->atoms[i].x.at(0);
      start.nodes(1, static_cast<Eigen::Index>(i)) = mu->atoms[i].x.at(1);
      start.weights[static_cast<Eigen::Index>(i)] = mu->atoms[i].w;
    }
  } else {
    const double cx = m_target[MultiIndex({1, 0})] / mass, cy = m_target[MultiIndex({0, 1})] / mass;
    double spread = 1.0;
    if (strength >= 2) {
      spread = std::sqrt(std::max(
          (m_target[MultiIndex({2, 0})] + m_target[MultiIndex({0, 2})]) / mass - cx * cx - cy * cy, 0.0));
    }
    const double radius = std::hypot(cx, cy) + 4.0 * std::max(spread, 1e-3) + 1.0;
    const int per_axis = std::max(16, cfg.max_nodes_init / std::max(2, 2 * curve.degree()));
    const MatrixXd pts = sample_plane_curve(curve, radius, per_axis);
    if (pts.cols() == 0) throw Error(ErrorKind::InfeasibleStart, "no real curve points in the sampling window");
    const MatrixXd A = kernels::monomial_matrix(basis, pts);
    VectorXd w;
    nnls_start(A, full_target, w);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      if (w[i] > 0.0) keep.push_back(i);
    }
    start.nodes.resize(2, static_cast<Eigen::Index>(keep.size()));
    start.weights.resize(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
      start.nodes.col(static_cast<Eigen::Index>(k)) = pts.col(keep[k]);
      start.weights[static_cast<Eigen::Index>(k)] = w[keep[k]];
    }
  }
  if (rule_residual(start, m_target, strength) > std::max(1e-9, cfg.exactness_tol)) {
    throw Error(ErrorKind::InfeasibleStart, "initial rule does not match the target moments");
  }
  return caratheodory_prune(start, m_target, strength, cfg.merge_tol);
}

SynthesisResult nlp_plane(const PlaneCurve& curve, const MomentVector& m_target, int strength, const NLPConfig& cfg,
                          const MeasureSpec* mu) {
  if (m_target.nvars() != 2) throw Error(ErrorKind::DimensionMismatch, "plane program needs bivariate moments");
  if (m_target.max_degree() < strength) throw Error(ErrorKind::InsufficientDegree, "target moments below strength");
  if (curve.F.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "plane curve with F = 0");
  const PlaneGeometry geo(curve.F);
  const double mass = m_target.mass();
  const MonomialBasis basis(2, strength);

  const QuadratureRule start = initial_rule(curve, m_target, strength, cfg, mu);

  SynthesisResult res;
  res.method = "nlp-plane";
  res.target_nodes = plane_target_nodes(curve, strength);

  std::array<double, 2> base;
  if (cfg.mass_node) {
    base = *cfg.mass_node;
    if (std::abs(geo.value(base[0], base[1])) > 1e-9 * geo.scale) {
      throw Error(ErrorKind::InvalidInput, "mass-correction point is not on the curve");
    }
  } else {
    base = nearest_curve_point(geo, curve, start.nodes);
  }
  double radius = 0.0;
  for (Eigen::Index i = 0; i < start.nodes.cols(); ++i) radius = std::max(radius, start.nodes.col(i).norm());
  radius = std::max(radius, std::hypot(base[0], base[1]));
  radius = cfg.disk_radius ? *cfg.disk_radius : 2.0 * std::max(radius, 1e-3);

  const MomentVector shifted = shift_moments(m_target, base, strength);
  PlaneProgram prog{geo, base, {}, {}, radius};
  for (const auto& a : basis) {
    if (a.order() >= 1) prog.alphas.push_back(a), prog.target.push_back(shifted[a]);
  }
  const opt::ConstrainedProblem full = prog.problem();
  const auto K = static_cast<Eigen::Index>(prog.alphas.size());
  opt::ConstrainedProblem pb;
  {
    const MatrixXd pts = sample_plane_curve(curve, radius, 64);
    MatrixXd V(K, pts.cols() + start.nodes.cols());
    auto fill = [&](Eigen::Index col, double x, double y) {
      for (Eigen::Index k = 0; k < K; ++k) {
        const auto& a = prog.alphas[static_cast<std::size_t>(k)];
        V(k, col) = std::pow(x - base[0], a[0]) * std::pow(y - base[1], a[1]) /
                    scale_of(prog.target[static_cast<std::size_t>(k)]);
      }
    };
    for (Eigen::Index i = 0; i < pts.cols(); ++i) fill(i, pts(0, i), pts(1, i));
    for (Eigen::Index i = 0; i < start.nodes.cols(); ++i) fill(pts.cols() + i, start.nodes(0, i), start.nodes(1, i));
    pb = reduce_equalities(full, span_rows(V), K);
  }
  opt::AlOptions ao;
  ao.max_outer = cfg.max_outer_iters;
  ao.max_inner = cfg.max_inner_iters;
  ao.penalty_growth = cfg.penalty_growth;
  const double ok_tol = 0.1 * cfg.exactness_tol;

  auto solve = [&](PlaneNodes& n) -> bool {
    VectorXd z;
    if (!run_program(pb, full, pack(n), ao, ok_tol, z, res.outer_iterations)) return false;
    const PlaneNodes out = unpack_plane(z);
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (std::hypot(out.X[i] + base[0], out.Y[i] + base[1]) > radius * (1.0 + 1e-9)) return false;
    }
    n = out;
    return true;
  };
  // Drops light nodes, nodes sitting on the base point, and merges close pairs.
  auto cleanup = [&](PlaneNodes& n) {
    PlaneNodes out;
    bool changed = false;
    for (std::size_t i = 0; i < n.size(); ++i) {
      if (n.w[i] <= cfg.weight_drop_tol * mass || std::hypot(n.X[i], n.Y[i]) <= cfg.merge_tol) {
        changed = true;
        continue;
      }
      bool merged = false;
      for (std::size_t j = 0; j < out.size(); ++j) {
        if (std::hypot(out.X[j] - n.X[i], out.Y[j] - n.Y[i]) <= cfg.merge_tol) {
          const double tot = out.w[j] + n.w[i];
          out.X[j] = (out.w[j] * out.X[j] + n.w[i] * n.X[i]) / tot;
          out.Y[j] = (out.w[j] * out.Y[j] + n.w[i] * n.Y[i]) / tot;
          out.w[j] = tot;
          merged = changed = true;
          break;
        }
      }
      if (!merged) out.w.push_back(n.w[i]), out.X.push_back(n.X[i]), out.Y.push_back(n.Y[i]);
    }
    n = out;
    return changed;
  };

  PlaneNodes nodes;
  for (int i = 0; i < start.size(); ++i) {
    nodes.w.push_back(start.weights[i]);
    nodes.X.push_back(start.nodes(0, i) - base[0]);
    nodes.Y.push_back(start.nodes(1, i) - base[1]);
  }
  cleanup(nodes);
  const int interior_target = res.target_nodes - 1;
  bool solved = solve(nodes);
  if (solved) {
    for (int round = 0; round < 4 * cfg.max_drop_rounds; ++round) {
      PlaneNodes trial = nodes;
      if (cleanup(trial)) {
        if (!solve(trial)) break;
        nodes = trial;
        continue;
      }
      if (static_cast<int>(nodes.size()) <= interior_target || round >= cfg.max_drop_rounds) break;
      std::vector<std::size_t> order(nodes.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return nodes.w[a] < nodes.w[b]; });
      bool dropped = false;
      for (auto victim : order) {
        if (nodes.w[victim] > 0.5 * mass) break;
        PlaneNodes tn;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
          if (i != victim) tn.w.push_back(nodes.w[i]), tn.X.push_back(nodes.X[i]), tn.Y.push_back(nodes.Y[i]);
        }
        if (solve(tn)) {
          nodes = tn;
          dropped = true;
          break;
        }
      }
      if (!dropped) break;
    }
  }

  if (solved) {
    double used = 0.0;
    for (double w : nodes.w) used += w;
    const double leftover = mass - used;
    if (leftover < -1e-9 * std::max(1.0, mass)) {
      throw Error(ErrorKind::MassCorrectionNegative, "interior weights exceed the total mass");
    }
    QuadratureRule rule;
    rule.strength = strength;
    rule.provenance = Provenance::NlpPlane;
    const bool add_base = leftover > cfg.weight_drop_tol * mass;
    const auto N = static_cast<Eigen::Index>(nodes.size());
    rule.nodes.resize(2, N + (add_base ? 1 : 0));
    rule.weights.resize(N + (add_base ? 1 : 0));
    for (Eigen::Index i = 0; i < N; ++i) {
      rule.nodes(0, i) = nodes.X[static_cast<std::size_t>(i)] + base[0];
      rule.nodes(1, i) = nodes.Y[static_cast<std::size_t>(i)] + base[1];
      rule.weights[i] = nodes.w[static_cast<std::size_t>(i)];
    }
    if (add_base) {
      rule.nodes(0, N) = base[0];
      rule.nodes(1, N) = base[1];
      rule.weights[N] = leftover;
    }
    rule = caratheodory_prune(rule, m_target, strength, cfg.merge_tol);
    rule.provenance = Provenance::NlpPlane;
    res.rule = rule;
    res.residual = rule_residual(rule, m_target, strength);
    res.converged = res.residual <= cfg.exactness_tol;
  }
  if (!res.converged) {
    res.rule = start;
    res.residual = rule_residual(start, m_target, strength);
    res.message = "solver did not reach the exactness tolerance; returning the pruned start";
  } else {
    res.kkt = kkt_analyze(res.rule, curve, strength, base);
    if (res.kkt.rank_deficient) res.message = "RankDeficientFit: multiplier system underdetermined, minimum-norm fit";
    int on_rim = 0;
    for (int i = 0; i < res.rule.size(); ++i) on_rim += res.rule.nodes.col(i).norm() >= radius * (1.0 - 1e-6) ? 1 : 0;
    if (on_rim > 0) {
      if (!res.message.empty()) res.message += "; ";
      res.message += "disk constraint active at " + std::to_string(on_rim) + " node(s); tangency there includes the disk multiplier";
    }
  }
  res.target_met = res.rule.size() <= res.target_nodes;
  res.bound_check = check_bounds(res.rule, curve, strength);
  return res;
}

// ---------------------------------------------------------------------------
// KKT analysis.

KKTReport kkt_analyze(const QuadratureRule& rule, const RationalCurve& curve, int strength) {
  const int N = rule.size();
  if (rule.parameter_values.size() != static_cast<std::size_t>(N)) {
    throw Error(ErrorKind::InvalidInput, "KKT analysis needs the parameter value of every node");
  }
  const MonomialBasis basis(curve.n(), strength);
  const auto K = static_cast<Eigen::Index>(basis.size());
  MatrixXd A(2 * N, K);
  VectorXd rhs(2 * N);
  std::vector<std::vector<double>> vals(static_cast<std::size_t>(N)), ders(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    const double t = rule.parameter_values[static_cast<std::size_t>(i)];
    curve_monomials(basis, curve, t, vals[static_cast<std::size_t>(i)], &ders[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < K; ++j) {
      A(2 * i, j) = vals[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      A(2 * i + 1, j) = rule.weights[i] * ders[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    rhs[2 * i] = 0.0;
    rhs[2 * i + 1] = -rational_penalty_derivative(curve, t);
  }
  Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(A);
  cod.setThreshold(1e-12);
  const VectorXd lambda = cod.solve(rhs);

  KKTReport rep;
  rep.lambda.assign(lambda.data(), lambda.data() + lambda.size());
  rep.fit_rank = static_cast<int>(cod.rank());
  // Unknowns counted modulo the curve ideal, which the fit cannot see.
  rep.fit_unknowns = static_cast<int>(rational_span(curve, basis, nullptr, rule.parameter_values, 8.0).rows());
  rep.rank_deficient = rep.fit_rank < std::min<int>(2 * N, rep.fit_unknowns);
  rep.fit_residual = N > 0 ? (A * lambda - rhs).lpNorm<Eigen::Infinity>() : 0.0;
  const double lnorm = lambda.norm();
  rep.H = compose_with_parametrization(MultivariatePolynomial::from_coefficients(basis, rep.lambda), curve).numerator;

  std::vector<double> Hp(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    double H = 0.0, dH = 0.0;
    for (Eigen::Index j = 0; j < K; ++j) {
      H += lambda[j] * vals[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      dH += lambda[j] * ders[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    Hp[static_cast<std::size_t>(i)] = dH;
    const double t = rule.parameter_values[static_cast<std::size_t>(i)];
    rep.H_values.push_back(lnorm > 0.0 ? std::abs(H) / lnorm : std::abs(H));
    rep.gradient_residuals.push_back(std::abs(dH + rational_penalty_derivative(curve, t) / rule.weights[i]));
  }

  // Interval bookkeeping between consecutive real poles.
  std::vector<double> cuts;
  cuts.push_back(-std::numeric_limits<double>::infinity());
  for (double z : curve.poles()) cuts.push_back(z);
  cuts.push_back(std::numeric_limits<double>::infinity());
  std::vector<double> roots;
  const bool h_zero = rep.H.is_zero();
  if (!h_zero && rep.H.degree() > 0) {
    for (const auto& r : real_roots(rep.H)) {
      if (curve.pole_distance(r.value) > 1e-9) roots.push_back(r.value);
    }
  }
  rep.sign_ok.assign(static_cast<std::size_t>(N), true);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    IntervalClass ic;
    ic.lo = cuts[k];
    ic.hi = cuts[k + 1];
    ic.minimizer = penalty_minimizer(curve, ic.lo, ic.hi);
    for (int i = 0; i < N; ++i) {
      const double t = rule.parameter_values[static_cast<std::size_t>(i)];
      if (!(t > ic.lo && t < ic.hi)) continue;
      ic.nodes.push_back(i);
      const double slack = 1e-8 * (1.0 + std::abs(Hp[static_cast<std::size_t>(i)]));
      if (t < ic.minimizer) {
        ic.left.push_back(i);
        rep.sign_ok[static_cast<std::size_t>(i)] = Hp[static_cast<std::size_t>(i)] >= -slack;
      } else if (t > ic.minimizer) {
        ic.right.push_back(i);
        rep.sign_ok[static_cast<std::size_t>(i)] = Hp[static_cast<std::size_t>(i)] <= slack;
      }
    }
    if (h_zero) {
      ic.h_roots = -1;
    } else {
      for (double r : roots) ic.h_roots += (r > ic.lo && r < ic.hi) ? 1 : 0;
    }
    const int T = std::max(ic.h_roots, 0);
    ic.candidate_bound = T % 2 == 0 ? T / 2 + 1 : (T + 1) / 2;
    rep.sign_pattern.push_back(std::move(ic));
  }
  return rep;
}

KKTReport kkt_analyze(const QuadratureRule& rule, const PlaneCurve& curve, int strength, std::array<double, 2> base) {
  if (rule.dim() != 2 && rule.size() > 0) throw Error(ErrorKind::DimensionMismatch, "plane KKT needs planar nodes");
  const PlaneGeometry geo(curve.F);
  const MonomialBasis full(2, strength);
  std::vector<MultiIndex> alphas;
  for (const auto& a : full) {
    if (a.order() >= 1) alphas.push_back(a);
  }
  const auto K = static_cast<Eigen::Index>(alphas.size());
  KKTReport rep;
  rep.plane = true;
  std::vector<int> interior;
  for (int i = 0; i < rule.size(); ++i) {
    if (std::hypot(rule.nodes(0, i) - base[0], rule.nodes(1, i) - base[1]) <= 1e-6) {
      rep.excluded.push_back(i);
    } else {
      interior.push_back(i);
    }
  }
  const auto M = static_cast<Eigen::Index>(interior.size());
  MatrixXd A(2 * M, K);
  VectorXd rhs(2 * M);
  std::vector<std::array<double, 2>> normals;
  auto mono = [](double X, double Y, int a, int b) { return std::pow(X, a) * std::pow(Y, b); };
  for (Eigen::Index r = 0; r < M; ++r) {
    const int i = interior[static_cast<std::size_t>(r)];
    const double X = rule.nodes(0, i) - base[0], Y = rule.nodes(1, i) - base[1];
    auto g = geo.grad(rule.nodes(0, i), rule.nodes(1, i));
    const double gn = std::hypot(g[0], g[1]);
    const std::array<double, 2> n = gn > 0.0 ? std::array<double, 2>{g[0] / gn, g[1] / gn} : std::array<double, 2>{1.0, 0.0};
    normals.push_back(n);
    for (Eigen::Index k = 0; k < K; ++k) {
      const int a = alphas[static_cast<std::size_t>(k)][0], b = alphas[static_cast<std::size_t>(k)][1];
      const double gx = a > 0 ? a * mono(X, Y, a - 1, b) : 0.0;
      const double gy = b > 0 ? b * mono(X, Y, a, b - 1) : 0.0;
      A(2 * r, k) = mono(X, Y, a, b);
      A(2 * r + 1, k) = -n[1] * gx + n[0] * gy;  // tangent (−n_y, n_x)
    }
    rhs[2 * r] = -1.0;
    rhs[2 * r + 1] = 0.0;
  }
  Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(A);
  cod.setThreshold(1e-12);
  const VectorXd lambda = M > 0 ? VectorXd(cod.solve(rhs)) : VectorXd::Zero(K);
  rep.lambda.assign(lambda.data(), lambda.data() + lambda.size());
  rep.fit_rank = M > 0 ? static_cast<int>(cod.rank()) : 0;
  {
    double reach = 1.0;
    for (int i = 0; i < rule.size(); ++i) reach = std::max(reach, 2.0 * rule.nodes.col(i).norm());
    const MatrixXd pts = sample_plane_curve(curve, reach, 32);
    MatrixXd V(K, pts.cols());
    for (Eigen::Index c = 0; c < pts.cols(); ++c) {
      for (Eigen::Index k = 0; k < K; ++k) {
        const auto& a = alphas[static_cast<std::size_t>(k)];
        V(k, c) = mono(pts(0, c) - base[0], pts(1, c) - base[1], a[0], a[1]);
      }
    }
    rep.fit_unknowns = pts.cols() > 0 ? static_cast<int>(span_rows(V, 1e-9).rows()) : static_cast<int>(K);
  }
  rep.rank_deficient = rep.fit_rank < std::min<int>(2 * static_cast<int>(M), rep.fit_unknowns);
  rep.fit_residual = M > 0 ? (A * lambda - rhs).lpNorm<Eigen::Infinity>() : 0.0;
  const double norm = std::sqrt(1.0 + lambda.squaredNorm());
  for (Eigen::Index r = 0; r < M; ++r) {
    const int i = interior[static_cast<std::size_t>(r)];
    const double X = rule.nodes(0, i) - base[0], Y = rule.nodes(1, i) - base[1];
    double G = 1.0, Gx = 0.0, Gy = 0.0;
    for (Eigen::Index k = 0; k < K; ++k) {
      const int a = alphas[static_cast<std::size_t>(k)][0], b = alphas[static_cast<std::size_t>(k)][1];
      G += lambda[k] * mono(X, Y, a, b);
      if (a > 0) Gx += lambda[k] * a * mono(X, Y, a - 1, b);
      if (b > 0) Gy += lambda[k] * b * mono(X, Y, a, b - 1);
    }
    const auto& n = normals[static_cast<std::size_t>(r)];
    const double normal = n[0] * Gx + n[1] * Gy;
    const double tangential = -n[1] * Gx + n[0] * Gy;
    rep.H_values.push_back(std::abs(G) / norm);
    rep.gradient_residuals.push_back(std::atan2(std::abs(tangential), std::abs(normal)));
    rep.sign_ok.push_back(true);
  }
  return rep;
}

}  // namespace curvequad
