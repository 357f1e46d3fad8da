#pragma once

#include <Eigen/Core>
#include <functional>

// Small dense solvers shared by the synthesis routines.

namespace curvequad::opt {

/// Value and gradient; return +inf (or NaN) for points outside the domain.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct LbfgsOptions {
  int max_iters = 500;
  int memory = 12;
  double grad_tol = 1e-10;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double f = 0.0;
  double grad_norm = 0.0;
  int iters = 0;
  bool converged = false;
};

/// Limited-memory BFGS with Armijo backtracking. Steps that leave the
/// domain are shortened until the objective is finite again.
LbfgsResult lbfgs(const Objective& fn, Eigen::VectorXd x0, const LbfgsOptions& opts = {});

/// Vector function with optional Jacobian.
using VectorFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd& x, Eigen::MatrixXd* jac)>;

/// min f(x) subject to c(x) = 0 and g(x) ≤ 0.
struct ConstrainedProblem {
  std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)> objective;
  VectorFunction equalities;
  VectorFunction inequalities;                      // optional
  std::function<bool(const Eigen::VectorXd&)> admissible;  // optional domain test
  std::function<void(Eigen::VectorXd&)> project;    // optional, applied after each inner solve
};

struct AlOptions {
  int max_outer = 40;
  int max_inner = 400;
  double penalty0 = 10.0;
  double penalty_growth = 10.0;
  double max_penalty = 1e10;
  double feas_tol = 1e-11;
  double opt_tol = 1e-9;
};

struct AlResult {
  Eigen::VectorXd x;
  Eigen::VectorXd lambda;
  Eigen::VectorXd mu;
  double objective = 0.0;
  double feasibility = 0.0;  // max |c|, max(g, 0)
  double stationarity = 0.0; // inner gradient norm at the last solve
  int outer_iters = 0;
  bool converged = false;
};

/// Powell–Hestenes–Rockafellar augmented Lagrangian with an L-BFGS inner solve.
AlResult augmented_lagrangian(const ConstrainedProblem& problem, Eigen::VectorXd x0, const AlOptions& opts = {});

struct DescentOptions {
  int max_iters = 3000;
  int memory = 8;
  double feas_tol = 1e-13;
  double stat_tol = 1e-10;
};

struct DescentResult {
  Eigen::VectorXd x;
  Eigen::VectorXd lambda;      // least-squares multipliers at the final point
  double objective = 0.0;
  double feasibility = 0.0;    // max |c| at the final point
  double stationarity = 0.0;   // max-norm of the tangential gradient
  int iters = 0;
  bool feasible = false;
  bool converged = false;
};

/// Feasible-path descent: quasi-Newton steps in the tangent space of
/// c(x) = 0, each followed by Gauss–Newton restoration. Inequalities are
/// enforced as a domain test. An infeasible start is restored first.
DescentResult feasible_descent(const ConstrainedProblem& problem, Eigen::VectorXd x0, const DescentOptions& opts = {});

/// Minimum-norm Gauss–Newton steps on c(x) = 0, keeping x admissible.
/// Returns the final max |c|.
double polish_feasibility(const ConstrainedProblem& problem, Eigen::VectorXd& x, double tol, int max_iters = 50);

/// Least-squares multipliers: argmin ‖∇f + Jᵀλ‖.
Eigen::VectorXd least_squares_multipliers(const Eigen::VectorXd& grad, const Eigen::MatrixXd& jac);

/// Lawson–Hanson nonnegative least squares min ‖Ax − b‖, x ≥ 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iters = 0);

/// Right singular vector of the smallest singular value; `ratio` receives
/// σ_min/σ_max (zero when A has more columns than rows).
Eigen::VectorXd null_vector(const Eigen::MatrixXd& A, double* ratio = nullptr);

}  // namespace curvequad::opt
