#pragma once

#include <Eigen/Dense>

#include <string_view>
#include <vector>

namespace vfix {

/// min ½ xᵀ H x + fᵀ x  subject to  W x ≤ w.
struct QpProblem {
  Eigen::MatrixXd hessian;
  Eigen::VectorXd linear;
  Eigen::MatrixXd constraint_matrix;
  Eigen::VectorXd constraint_bounds;

  Eigen::Index variables() const { return hessian.rows(); }
  Eigen::Index constraints() const { return constraint_matrix.rows(); }
  double objective(const Eigen::VectorXd& x) const { return 0.5 * x.dot(hessian * x) + linear.dot(x); }
};

enum class QpStatus { optimal, infeasible, iteration_limit };

std::string_view to_string(QpStatus s);

struct QpOptions {
  /// Constraint violation accepted at termination.
  double feasibility_tolerance{1e-12};
  int max_iterations{0};  // 0 selects 10·(n + m) + 100
};

struct QpSolution {
  QpStatus status{QpStatus::optimal};
  Eigen::VectorXd x;
  /// One non-negative multiplier per row of W.
  Eigen::VectorXd multipliers;
  std::vector<int> active_set;
  int iterations{0};
};

/// Dual active-set method of Goldfarb and Idnani for strictly convex problems. It needs no
/// feasible starting point and reports infeasibility when a violated row cannot be satisfied.
/// Throws std::invalid_argument when H is not symmetric positive definite or dimensions disagree.
QpSolution solve_qp(const QpProblem& problem, const QpOptions& options = {});

struct KktResiduals {
  double stationarity{0.0};
  double primal{0.0};
  double dual{0.0};
  double complementarity{0.0};
  double max() const;
};

/// Infinity-norm residuals of the KKT conditions at (x, λ).
KktResiduals kkt_residuals(const QpProblem& problem, const Eigen::VectorXd& x, const Eigen::VectorXd& multipliers);

}  // namespace vfix
