#include "vfix/controller.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vfix {

std::string_view to_string(ControllerMode m) { return m == ControllerMode::baseline ? "baseline" : "proposed"; }

ControllerMode controller_mode_from_string(std::string_view s) {
  if (s == "baseline") {
    return ControllerMode::baseline;
  }
  if (s == "proposed") {
    return ControllerMode::proposed;
  }
  throw std::invalid_argument("unknown controller mode '" + std::string(s) + "'");
}

namespace {

void require(bool ok, const char* message) {
  if (!ok) {
    throw std::invalid_argument(message);
  }
}

bool unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

void ControllerParams::validate() const {
  require(unit_interval(alpha), "alpha must lie in [0, 1]");
  require(unit_interval(beta), "beta must lie in [0, 1]");
  require(unit_interval(gamma), "gamma must lie in [0, 1]");
  require(lambda > 0.0 && std::isfinite(lambda), "lambda must be positive");
  require(eta >= 0.0 && std::isfinite(eta), "eta must be non-negative");
  require(eta_guide >= 0.0 && std::isfinite(eta_guide), "eta_guide must be non-negative");
  require(qp_tolerance > 0.0, "qp_tolerance must be positive");
}

void FixtureParams::validate() const {
  require(eta_d >= 0.0 && eta_rcm >= 0.0 && eta_jl >= 0.0, "fixture gains must be non-negative");
  require(d_safe_rcm > 0.0, "d_safe_rcm must be positive");
  require(r_guide > 0.0, "r_guide must be positive");
  require(lvf.r_min > 0.0, "r_min must be positive");
  require(lvf.r_max > 0.0, "r_max must be positive");
  require(lvf.d_pi_min < lvf.d_pi_max, "d_pi_min must be smaller than d_pi_max");
  require(lvf.shaft_length > 0.0, "shaft_length must be positive");
}

Vector4 rotation_error(const UnitQuaternion& r, const UnitQuaternion& r_d) {
  const Vector4 a = r.quaternion().vec4();
  const Vector4 b = r_d.quaternion().vec4();
  const double s = a.dot(b) < 0.0 ? -1.0 : 1.0;
  return a - s * b;
}

void QuadraticObjective::add_squared_residual(const MatrixX& a, const VectorX& b, double weight, Eigen::Index offset) {
  if (weight == 0.0) {
    return;
  }
  const Eigen::Index k = a.cols();
  hessian.block(offset, offset, k, k).noalias() += 2.0 * weight * a.transpose() * a;
  linear.segment(offset, k).noalias() += 2.0 * weight * a.transpose() * b;
  constant += weight * b.squaredNorm();
}

QuadraticObjective& QuadraticObjective::operator+=(const QuadraticObjective& other) {
  hessian += other.hessian;
  linear += other.linear;
  constant += other.constant;
  return *this;
}

namespace {

// ‖λ q̇_i‖².
void add_damping(QuadraticObjective& obj, int dof, double lambda, double weight, Eigen::Index offset) {
  obj.hessian.block(offset, offset, dof, dof).diagonal().array() += 2.0 * weight * lambda * lambda;
}

// α f_t + (1 − α) f_r for one robot, optionally with f_Λ.
void add_robot_tracking(QuadraticObjective& obj, const KinematicState& s, const TrackingTarget& target,
                        const ControllerParams& p, double weight, bool with_damping, Eigen::Index offset) {
  const Vector3 t_err = s.tip() - target.translation;
  const Vector4 r_err = rotation_error(s.pose.rotation(), target.rotation);
  obj.add_squared_residual(s.translation_jacobian, p.eta * t_err, weight * p.alpha, offset);
  obj.add_squared_residual(s.rotation_jacobian, p.eta * r_err, weight * (1.0 - p.alpha), offset);
  if (with_damping) {
    add_damping(obj, s.dof(), p.lambda, weight, offset);
  }
}

}  // namespace

QuadraticObjective build_tracking_objective(const KinematicState& first, const KinematicState& second,
                                            const TrackingTarget& target_first, const TrackingTarget& target_second,
                                            const ControllerParams& params) {
  const Eigen::Index n1 = first.dof();
  QuadraticObjective obj(n1 + second.dof());
  if (params.mode == ControllerMode::baseline) {
    add_robot_tracking(obj, first, target_first, params, params.beta, true, 0);
    add_robot_tracking(obj, second, target_second, params, 1.0 - params.beta, true, n1);
  } else {
    add_robot_tracking(obj, first, target_first, params, params.gamma, false, 0);
    add_robot_tracking(obj, second, target_second, params, params.gamma, false, n1);
    add_damping(obj, first.dof(), params.lambda, 1.0, 0);
    add_damping(obj, second.dof(), params.lambda, 1.0, n1);
  }
  return obj;
}

DistanceJacobian guidance_distance(const KinematicState& first, const KinematicState& second, double r_guide) {
  DistanceJacobian d =
      point_line_distance_jacobians(first.shaft, first.shaft_jacobian, second.tip(), second.translation_jacobian);
  d.value -= r_guide * r_guide;
  return d;
}

QuadraticObjective build_guidance_objective(const KinematicState& first, const KinematicState& second,
                                            const ControllerParams& params, double r_guide) {
  const Eigen::Index n1 = first.dof();
  QuadraticObjective obj(n1 + second.dof());
  const DistanceJacobian g = guidance_distance(first, second, r_guide);
  const VectorX b = VectorX::Constant(1, params.eta_guide * g.value);
  const double w = 1.0 - params.gamma;
  obj.add_squared_residual(g.first, b, w, 0);
  obj.add_squared_residual(g.second, b, w, n1);
  return obj;
}

ControlOutput control_step(const RobotContext& first, const RobotContext& second, const ControllerParams& params,
                           const FixtureParams& fixtures, const ConstraintSet& extra) {
  const KinematicState& s1 = first.state;
  const KinematicState& s2 = second.state;
  const StackLayout layout{s1.dof(), s2.dof()};
  const Eigen::Index n = layout.columns();

  QuadraticObjective obj = build_tracking_objective(s1, s2, first.target, second.target, params);
  const DistanceJacobian guide = guidance_distance(s1, s2, fixtures.r_guide);
  if (params.mode == ControllerMode::proposed) {
    obj += build_guidance_objective(s1, s2, params, fixtures.r_guide);
  }

  ControlOutput out;
  out.guidance_error = guide.value;
  ConstraintSet& rows = out.rows;
  if (first.model != nullptr) {
    rows.append(joint_limit_constraints(s1.q, first.model->q_min, first.model->q_max, fixtures.eta_jl, 0, layout));
  }
  if (second.model != nullptr) {
    rows.append(joint_limit_constraints(s2.q, second.model->q_min, second.model->q_max, fixtures.eta_jl, 1, layout));
  }
  if (fixtures.rcm) {
    const double d_safe = fixtures.d_safe_rcm * fixtures.d_safe_rcm;
    rows.add(rcm_constraint(s1, 0, layout, first.rcm_center, d_safe, fixtures.eta_rcm));
    rows.add(rcm_constraint(s2, 1, layout, second.rcm_center, d_safe, fixtures.eta_rcm));
  }
  if (fixtures.lvf_rows) {
    rows.append(lvf_constraints(s1, s2, layout, fixtures.lvf, fixtures.eta_d));
  } else if (fixtures.shaft_shaft) {
    rows.add(shaft_shaft_constraint(s1, s2, layout, fixtures.lvf.r_min, fixtures.eta_d, fixtures.lvf.shaft_model,
                                    fixtures.lvf.shaft_length));
  }
  rows.append(extra);

  out.problem.hessian = 0.5 * (obj.hessian + obj.hessian.transpose());
  out.problem.linear = obj.linear;
  out.problem.constraint_matrix = rows.matrix(n);
  out.problem.constraint_bounds = rows.bounds();

  const QpSolution sol = solve_qp(out.problem);
  out.status = sol.status;
  out.iterations = sol.iterations;
  if (sol.status == QpStatus::optimal) {
    out.qdot = sol.x;
    out.kkt = kkt_residuals(out.problem, sol.x, sol.multipliers);
  } else {
    out.infeasible = true;
    out.qdot = VectorX::Zero(n);
  }
  out.margins = out.problem.constraint_bounds - out.problem.constraint_matrix * out.qdot;
  return out;
}

}  // namespace vfix
