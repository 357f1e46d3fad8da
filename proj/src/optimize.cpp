#include "curvequad/optimize.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace curvequad::opt {

LbfgsResult lbfgs(const Objective& fn, Eigen::VectorXd x0, const LbfgsOptions& opts) {
  LbfgsResult res;
  res.x = std::move(x0);
  Eigen::VectorXd g(res.x.size());
  res.f = fn(res.x, g);
  if (!std::isfinite(res.f)) return res;
  std::deque<Eigen::VectorXd> S, Y;
  std::deque<double> rho;
  Eigen::VectorXd g_new(res.x.size()), x_new;
  int flat_steps = 0;

  for (res.iters = 0; res.iters < opts.max_iters; ++res.iters) {
    res.grad_norm = g.lpNorm<Eigen::Infinity>();
    if (res.grad_norm <= opts.grad_tol) {
      res.converged = true;
      break;
    }
    // Two-loop recursion.
    Eigen::VectorXd q = -g;
    std::vector<double> alpha(S.size());
    for (int i = static_cast<int>(S.size()) - 1; i >= 0; --i) {
      alpha[static_cast<std::size_t>(i)] = rho[static_cast<std::size_t>(i)] * S[static_cast<std::size_t>(i)].dot(q);
      q -= alpha[static_cast<std::size_t>(i)] * Y[static_cast<std::size_t>(i)];
    }
    if (!S.empty()) q *= S.back().dot(Y.back()) / Y.back().squaredNorm();
    for (std::size_t i = 0; i < S.size(); ++i) {
      const double beta = rho[i] * Y[i].dot(q);
      q += (alpha[i] - beta) * S[i];
    }
    Eigen::VectorXd d = q;
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      S.clear(), Y.clear(), rho.clear();
      d = -g;
      slope = -g.squaredNorm();
    }
    double step = S.empty() ? std::min(1.0, 1.0 / std::max(d.lpNorm<Eigen::Infinity>(), 1e-300)) : 1.0;
    bool accepted = false;
    double f_new = 0.0;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = res.x + step * d;
      f_new = fn(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= res.f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (S.empty()) break;
      S.clear(), Y.clear(), rho.clear();
      continue;
    }
    const Eigen::VectorXd s = x_new - res.x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      S.push_back(s), Y.push_back(y), rho.push_back(1.0 / sy);
      if (static_cast<int>(S.size()) > opts.memory) S.pop_front(), Y.pop_front(), rho.pop_front();
    }
    const double df = res.f - f_new;
    res.x = x_new;
    g = g_new;
    res.f = f_new;
    flat_steps = df <= 1e-16 * (1.0 + std::abs(res.f)) ? flat_steps + 1 : 0;
    if (flat_steps >= 5) break;
  }
  res.grad_norm = g.lpNorm<Eigen::Infinity>();
  res.converged = res.converged || res.grad_norm <= opts.grad_tol;
  return res;
}

namespace {

double violation(const Eigen::VectorXd& c, const Eigen::VectorXd& gi) {
  double v = c.size() ? c.lpNorm<Eigen::Infinity>() : 0.0;
  for (Eigen::Index k = 0; k < gi.size(); ++k) v = std::max(v, gi[k]);
  return v;
}

}  // namespace

AlResult augmented_lagrangian(const ConstrainedProblem& pb, Eigen::VectorXd x0, const AlOptions& opts) {
  AlResult res;
  res.x = std::move(x0);
  const bool has_ineq = static_cast<bool>(pb.inequalities);
  Eigen::VectorXd c = pb.equalities(res.x, nullptr);
  Eigen::VectorXd gi = has_ineq ? pb.inequalities(res.x, nullptr) : Eigen::VectorXd();
  res.lambda = Eigen::VectorXd::Zero(c.size());
  res.mu = Eigen::VectorXd::Zero(gi.size());
  double rho = opts.penalty0;
  double prev_viol = violation(c, gi);

  for (res.outer_iters = 0; res.outer_iters < opts.max_outer; ++res.outer_iters) {
    const Eigen::VectorXd lambda = res.lambda, mu = res.mu;
    auto merit = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) -> double {
      if (pb.admissible && !pb.admissible(x)) return std::numeric_limits<double>::infinity();
      Eigen::VectorXd gf(x.size());
      double val = pb.objective(x, &gf);
      Eigen::MatrixXd J;
      const Eigen::VectorXd cx = pb.equalities(x, &J);
      const Eigen::VectorXd shifted = lambda + rho * cx;
      val += lambda.dot(cx) + 0.5 * rho * cx.squaredNorm();
      grad = gf + J.transpose() * shifted;
      if (has_ineq) {
        Eigen::MatrixXd Jg;
        const Eigen::VectorXd gx = pb.inequalities(x, &Jg);
        const Eigen::VectorXd act = (mu + rho * gx).cwiseMax(0.0);
        val += (act.squaredNorm() - mu.squaredNorm()) / (2.0 * rho);
        grad += Jg.transpose() * act;
      }
      return std::isfinite(val) ? val : std::numeric_limits<double>::infinity();
    };
    LbfgsOptions lo;
    lo.max_iters = opts.max_inner;
    lo.grad_tol = std::max(opts.opt_tol, std::pow(0.1, res.outer_iters + 2));
    const LbfgsResult inner = lbfgs(merit, res.x, lo);
    res.x = inner.x;
    res.stationarity = inner.grad_norm;
    if (pb.project) pb.project(res.x);

    c = pb.equalities(res.x, nullptr);
    res.lambda += rho * c;
    if (has_ineq) {
      gi = pb.inequalities(res.x, nullptr);
      res.mu = (res.mu + rho * gi).cwiseMax(0.0);
    }
    const double viol = violation(c, gi);
    res.feasibility = viol;
    if (viol <= opts.feas_tol && inner.grad_norm <= std::max(opts.opt_tol, 1e-6)) {
      res.converged = true;
      ++res.outer_iters;
      break;
    }
    if (viol > 0.25 * prev_viol) rho = std::min(rho * opts.penalty_growth, opts.max_penalty);
    prev_viol = viol;
  }
  res.objective = pb.objective(res.x, nullptr);
  return res;
}

double polish_feasibility(const ConstrainedProblem& pb, Eigen::VectorXd& x, double tol, int max_iters) {
  Eigen::MatrixXd J;
  Eigen::VectorXd c = pb.equalities(x, &J);
  double norm = c.lpNorm<Eigen::Infinity>();
  for (int it = 0; it < max_iters && norm > tol; ++it) {
    const Eigen::VectorXd dx = -Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(J).solve(c);
    double step = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 30; ++ls) {
      Eigen::VectorXd trial = x + step * dx;
      if (!pb.admissible || pb.admissible(trial)) {
        const Eigen::VectorXd ct = pb.equalities(trial, nullptr);
        const double tn = ct.lpNorm<Eigen::Infinity>();
        if (tn < norm) {
          x = std::move(trial);
          improved = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!improved) break;
    c = pb.equalities(x, &J);
    norm = c.lpNorm<Eigen::Infinity>();
  }
  return norm;
}

namespace {

bool inside(const ConstrainedProblem& pb, const Eigen::VectorXd& x) {
  if (!x.allFinite()) return false;
  if (pb.admissible && !pb.admissible(x)) return false;
  if (pb.inequalities) {
    const Eigen::VectorXd g = pb.inequalities(x, nullptr);
    if (g.size() > 0 && g.maxCoeff() > 0.0) return false;
  }
  return true;
}

// Component of v orthogonal to the row space of J, with the coefficients of
// the removed part.
Eigen::VectorXd tangential(const Eigen::MatrixXd& J, const Eigen::VectorXd& v, Eigen::VectorXd* coeffs) {
  if (J.rows() == 0) {
    if (coeffs) coeffs->resize(0);
    return v;
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(J.transpose());
  const Eigen::VectorXd y = cod.solve(v);
  if (coeffs) *coeffs = y;
  return v - J.transpose() * y;
}

}  // namespace

DescentResult feasible_descent(const ConstrainedProblem& pb, Eigen::VectorXd x0, const DescentOptions& opts) {
  DescentResult res;
  res.x = std::move(x0);
  res.feasibility = polish_feasibility(pb, res.x, opts.feas_tol);
  if (!(res.feasibility <= opts.feas_tol) || !inside(pb, res.x)) return res;
  res.feasible = true;

  Eigen::VectorXd g(res.x.size());
  Eigen::MatrixXd J;
  double f = pb.objective(res.x, &g);
  pb.equalities(res.x, &J);
  Eigen::VectorXd pg = tangential(J, g, &res.lambda);
  std::deque<Eigen::VectorXd> S, Y;
  std::deque<double> rho;
  double alpha = 1.0;
  int flat = 0;

  for (res.iters = 0; res.iters < opts.max_iters; ++res.iters) {
    res.stationarity = pg.lpNorm<Eigen::Infinity>();
    if (res.stationarity <= opts.stat_tol) {
      res.converged = true;
      break;
    }
    Eigen::VectorXd q = -pg;
    std::vector<double> a(S.size());
    for (int i = static_cast<int>(S.size()) - 1; i >= 0; --i) {
      const auto k = static_cast<std::size_t>(i);
      a[k] = rho[k] * S[k].dot(q);
      q -= a[k] * Y[k];
    }
    if (!S.empty()) q *= S.back().dot(Y.back()) / Y.back().squaredNorm();
    for (std::size_t k = 0; k < S.size(); ++k) q += (a[k] - rho[k] * Y[k].dot(q)) * S[k];
    Eigen::VectorXd d = tangential(J, q, nullptr);
    if (!(d.dot(pg) < 0.0)) {
      S.clear(), Y.clear(), rho.clear();
      d = -pg;
    }
    const double slope = d.dot(pg);
    double step = S.empty() ? std::min(1.0, alpha / std::max(d.lpNorm<Eigen::Infinity>(), 1e-300)) : 1.0;
    bool accepted = false;
    Eigen::VectorXd xt, gt(res.x.size());
    double ft = 0.0;
    for (int ls = 0; ls < 40; ++ls) {
      xt = res.x + step * d;
      if (inside(pb, xt) && polish_feasibility(pb, xt, opts.feas_tol, 20) <= opts.feas_tol && inside(pb, xt)) {
        ft = pb.objective(xt, &gt);
        if (std::isfinite(ft) && ft <= f + 1e-4 * step * slope) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (S.empty()) break;
      S.clear(), Y.clear(), rho.clear();
      continue;
    }
    alpha = std::max(2.0 * step * d.lpNorm<Eigen::Infinity>(), 1e-8);
    Eigen::MatrixXd Jt;
    pb.equalities(xt, &Jt);
    Eigen::VectorXd lam;
    const Eigen::VectorXd pgt = tangential(Jt, gt, &lam);
    const Eigen::VectorXd s = xt - res.x, y = pgt - pg;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      S.push_back(s), Y.push_back(y), rho.push_back(1.0 / sy);
      if (static_cast<int>(S.size()) > opts.memory) S.pop_front(), Y.pop_front(), rho.pop_front();
    }
    flat = f - ft <= 1e-15 * (1.0 + std::abs(f)) ? flat + 1 : 0;
    res.x = xt, f = ft, g = gt, J = Jt, pg = pgt, res.lambda = lam;
    if (flat >= 10) break;
  }
  res.stationarity = pg.lpNorm<Eigen::Infinity>();
  res.converged = res.converged || res.stationarity <= opts.stat_tol;
  res.objective = f;
  res.feasibility = pb.equalities(res.x, nullptr).lpNorm<Eigen::Infinity>();
  return res;
}

Eigen::VectorXd least_squares_multipliers(const Eigen::VectorXd& grad, const Eigen::MatrixXd& jac) {
  if (jac.rows() == 0) return {};
  const Eigen::MatrixXd Jt = jac.transpose();
  return Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(Jt).solve(-grad);
}

Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iters) {
  const Eigen::Index n = A.cols();
  if (max_iters <= 0) max_iters = static_cast<int>(3 * n + 10);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() * A.cwiseAbs().colwise().sum().maxCoeff() *
                     static_cast<double>(std::max(A.rows(), n));

  auto solve_passive = [&](Eigen::VectorXd& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    }
    z.setZero(n);
    if (idx.empty()) return;
    Eigen::MatrixXd Ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
    const Eigen::VectorXd zp = Ap.colPivHouseholderQr().solve(b);
    for (std::size_t k = 0; k < idx.size(); ++k) z[idx[k]] = zp[static_cast<Eigen::Index>(k)];
  };

  Eigen::VectorXd w = A.transpose() * (b - A * x);
  for (int outer = 0; outer < max_iters; ++outer) {
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w[j] > best_w) best_w = w[j], best = j;
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;
    Eigen::VectorXd z;
    for (int inner = 0; inner < 3 * n + 10; ++inner) {
      solve_passive(z);
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z[j] <= 0.0) feasible = false;
      }
      if (feasible) break;
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z[j] <= 0.0 && x[j] > z[j]) alpha = std::min(alpha, x[j] / (x[j] - z[j]));
      }
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x[j] <= tol) passive[static_cast<std::size_t>(j)] = false, x[j] = 0.0;
      }
    }
    x = z.cwiseMax(0.0);
    w = A.transpose() * (b - A * x);
  }
  return x;
}

Eigen::VectorXd null_vector(const Eigen::MatrixXd& A, double* ratio) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (ratio) {
    if (A.cols() > A.rows() || sv.size() == 0 || sv[0] == 0.0) {
      *ratio = 0.0;
    } else {
      *ratio = sv[sv.size() - 1] / sv[0];
    }
  }
  return svd.matrixV().col(A.cols() - 1);
}

}  // namespace curvequad::opt
