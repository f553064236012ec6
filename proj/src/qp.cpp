#include "vfix/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vfix {

std::string_view to_string(QpStatus s) {
  switch (s) {
    case QpStatus::optimal:
      return "optimal";
    case QpStatus::infeasible:
      return "infeasible";
    case QpStatus::iteration_limit:
      return "iteration_limit";
  }
  return "unknown";
}

double KktResiduals::max() const { return std::max({stationarity, primal, dual, complementarity}); }

KktResiduals kkt_residuals(const QpProblem& problem, const Eigen::VectorXd& x, const Eigen::VectorXd& multipliers) {
  KktResiduals r;
  Eigen::VectorXd grad = problem.hessian * x + problem.linear;
  if (problem.constraints() > 0) {
    grad += problem.constraint_matrix.transpose() * multipliers;
    const Eigen::VectorXd slack = problem.constraint_bounds - problem.constraint_matrix * x;
    r.primal = std::max(0.0, -slack.minCoeff());
    r.dual = std::max(0.0, -multipliers.minCoeff());
    r.complementarity = multipliers.cwiseProduct(slack).cwiseAbs().maxCoeff();
  }
  r.stationarity = grad.cwiseAbs().maxCoeff();
  return r;
}

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Factorization state of the dual method. J = L⁻ᵀ Q and the first q columns of Q span the active
// constraint normals, with R upper triangular so that Jᵀ N_active = [R; 0].
class DualActiveSet {
 public:
  DualActiveSet(const MatrixXd& j0, Index constraints) : j_(j0), r_(MatrixXd::Zero(j0.rows(), j0.rows())) {
    active_.reserve(static_cast<std::size_t>(std::min(constraints, j0.rows())));
  }

  Index size() const { return static_cast<Index>(active_.size()); }
  const std::vector<int>& active() const { return active_; }
  std::vector<double>& multipliers() { return u_; }

  // z = J₂ J₂ᵀ n (primal step direction) and r = R⁻¹ J₁ᵀ n (dual step direction).
  void directions(const VectorXd& normal, VectorXd& d, VectorXd& z, VectorXd& r) const {
    const Index n = j_.rows();
    const Index q = size();
    d = j_.transpose() * normal;
    z = j_.rightCols(n - q) * d.tail(n - q);
    r.resize(q);
    if (q > 0) {
      r = r_.topLeftCorner(q, q).triangularView<Eigen::Upper>().solve(d.head(q));
    }
  }

  // Appends a constraint given d = Jᵀ n. Returns false if it is numerically dependent.
  bool add(int index, double multiplier, VectorXd d) {
    const Index n = j_.rows();
    const Index q = size();
    for (Index k = n - 1; k >= q + 1; --k) {
      double cc = d[k - 1];
      double ss = d[k];
      const double h = std::hypot(cc, ss);
      if (h == 0.0) {
        continue;
      }
      d[k] = 0.0;
      ss /= h;
      cc /= h;
      if (cc < 0.0) {
        cc = -cc;
        ss = -ss;
        d[k - 1] = -h;
      } else {
        d[k - 1] = h;
      }
      const double xny = ss / (1.0 + cc);
      for (Index row = 0; row < n; ++row) {
        const double t1 = j_(row, k - 1);
        const double t2 = j_(row, k);
        j_(row, k - 1) = t1 * cc + t2 * ss;
        j_(row, k) = xny * (t1 + j_(row, k - 1)) - t2;
      }
    }
    const double diag = std::abs(d[q]);
    if (diag <= std::numeric_limits<double>::epsilon() * r_norm_) {
      return false;
    }
    r_.col(q).head(q + 1) = d.head(q + 1);
    r_norm_ = std::max(r_norm_, diag);
    active_.push_back(index);
    u_.push_back(multiplier);
    return true;
  }

  void remove(int index) {
    const Index n = j_.rows();
    const auto it = std::find(active_.begin(), active_.end(), index);
    const Index pos = it - active_.begin();
    const Index q = size();
    for (Index k = pos; k < q - 1; ++k) {
      r_.col(k) = r_.col(k + 1);
    }
    r_.col(q - 1).setZero();
    active_.erase(it);
    u_.erase(u_.begin() + pos);
    const Index q_new = q - 1;
    // Restore the triangular shape of R with Givens rotations, mirrored on J.
    for (Index k = pos; k < q_new; ++k) {
      double cc = r_(k, k);
      double ss = r_(k + 1, k);
      const double h = std::hypot(cc, ss);
      if (h == 0.0) {
        continue;
      }
      cc /= h;
      ss /= h;
      r_(k + 1, k) = 0.0;
      if (cc < 0.0) {
        r_(k, k) = -h;
        cc = -cc;
        ss = -ss;
      } else {
        r_(k, k) = h;
      }
      const double xny = ss / (1.0 + cc);
      for (Index col = k + 1; col < q_new; ++col) {
        const double t1 = r_(k, col);
        const double t2 = r_(k + 1, col);
        r_(k, col) = t1 * cc + t2 * ss;
        r_(k + 1, col) = xny * (t1 + r_(k, col)) - t2;
      }
      for (Index row = 0; row < n; ++row) {
        const double t1 = j_(row, k);
        const double t2 = j_(row, k + 1);
        j_(row, k) = t1 * cc + t2 * ss;
        j_(row, k + 1) = xny * (j_(row, k) + t1) - t2;
      }
    }
  }

 private:
  MatrixXd j_;
  MatrixXd r_;
  double r_norm_{1.0};
  std::vector<int> active_;
  std::vector<double> u_;
};

void validate(const QpProblem& p) {
  const Index n = p.variables();
  if (n == 0 || p.hessian.cols() != n || p.linear.size() != n) {
    throw std::invalid_argument("solve_qp: Hessian and linear term dimensions disagree");
  }
  if (p.constraint_matrix.rows() != p.constraint_bounds.size() ||
      (p.constraints() > 0 && p.constraint_matrix.cols() != n)) {
    throw std::invalid_argument("solve_qp: constraint dimensions disagree");
  }
  if (!p.hessian.allFinite() || !p.linear.allFinite() || !p.constraint_matrix.allFinite() ||
      !p.constraint_bounds.allFinite()) {
    throw std::invalid_argument("solve_qp: non-finite problem data");
  }
  const double asym = (p.hessian - p.hessian.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(1.0, p.hessian.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("solve_qp: Hessian is not symmetric");
  }
}

}  // namespace

QpSolution solve_qp(const QpProblem& problem, const QpOptions& options) {
  validate(problem);
  const Index n = problem.variables();
  const Index m = problem.constraints();

  const Eigen::LLT<MatrixXd> llt(problem.hessian);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("solve_qp: Hessian is not positive definite");
  }
  // J = L⁻ᵀ.
  const MatrixXd lower = llt.matrixL();
  const MatrixXd j0 = lower.transpose().triangularView<Eigen::Upper>().solve(MatrixXd::Identity(n, n));

  QpSolution sol;
  sol.x = llt.solve(-problem.linear);
  sol.multipliers = VectorXd::Zero(m);

  // Rows as nᵢᵀ x ≥ bᵢ with nᵢ = −Wᵢ and bᵢ = −wᵢ.
  auto slack = [&](Index i) { return problem.constraint_bounds[i] - problem.constraint_matrix.row(i).dot(sol.x); };

  DualActiveSet state(j0, m);
  std::vector<bool> excluded(static_cast<std::size_t>(m), false);
  const int max_iterations = options.max_iterations > 0 ? options.max_iterations : static_cast<int>(10 * (n + m) + 100);
  VectorXd d;
  VectorXd z;
  VectorXd r;

  auto finish = [&](QpStatus status) {
    sol.status = status;
    sol.active_set = state.active();
    const auto& u = state.multipliers();
    for (std::size_t k = 0; k < u.size(); ++k) {
      sol.multipliers[state.active()[k]] = u[k];
    }
    return sol;
  };

  while (true) {
    // Most violated inactive constraint.
    Index p = -1;
    double worst = -options.feasibility_tolerance;
    for (Index i = 0; i < m; ++i) {
      if (excluded[static_cast<std::size_t>(i)] ||
          std::find(state.active().begin(), state.active().end(), static_cast<int>(i)) != state.active().end()) {
        continue;
      }
      const double s = slack(i);
      if (s < worst) {
        worst = s;
        p = i;
      }
    }
    if (p < 0) {
      return finish(QpStatus::optimal);
    }

    const VectorXd normal = -problem.constraint_matrix.row(p).transpose();
    double u_new = 0.0;
    double s_p = slack(p);
    while (true) {
      if (++sol.iterations > max_iterations) {
        return finish(QpStatus::iteration_limit);
      }
      state.directions(normal, d, z, r);

      // Dual step bound from active multipliers that would turn negative.
      double t1 = kInf;
      int drop = -1;
      const auto& u = state.multipliers();
      for (Index k = 0; k < r.size(); ++k) {
        if (r[k] > 0.0) {
          const double ratio = u[static_cast<std::size_t>(k)] / r[k];
          if (ratio < t1) {
            t1 = ratio;
            drop = state.active()[static_cast<std::size_t>(k)];
          }
        }
      }
      // Primal step that makes constraint p active.
      double t2 = kInf;
      const double zn = z.dot(normal);
      if (z.squaredNorm() > std::numeric_limits<double>::epsilon() * std::numeric_limits<double>::epsilon() &&
          zn > 0.0) {
        t2 = -s_p / zn;
      }
      const double t = std::min(t1, t2);
      if (t == kInf) {
        return finish(QpStatus::infeasible);
      }

      auto& um = state.multipliers();
      for (Index k = 0; k < r.size(); ++k) {
        um[static_cast<std::size_t>(k)] -= t * r[k];
      }
      u_new += t;
      if (t2 == kInf) {
        state.remove(drop);
        continue;
      }
      sol.x += t * z;
      if (t == t2) {
        if (!state.add(static_cast<int>(p), u_new, d)) {
          excluded[static_cast<std::size_t>(p)] = true;
        }
        break;
      }
      state.remove(drop);
      s_p = slack(p);
    }
  }
}

}  // namespace vfix
