#pragma once

#include "vfix/kinematics.hpp"
#include "vfix/qp.hpp"
#include "vfix/vfi.hpp"

#include <string_view>

namespace vfix {

enum class ControllerMode {
  /// β𝓕₁ + (1 − β)𝓕₂.
  baseline,
  /// γ(𝓕₁ + 𝓕₂) + (1 − γ)(𝒢₁ + 𝒢₂) + f_Λ,1 + f_Λ,2.
  proposed,
};

std::string_view to_string(ControllerMode m);
ControllerMode controller_mode_from_string(std::string_view s);

struct ControllerParams {
  double alpha{0.999};
  double beta{0.6};
  double gamma{0.01};
  double eta{150.0};
  double eta_guide{1.0};
  double lambda{0.02};
  ControllerMode mode{ControllerMode::proposed};
  double qp_tolerance{1e-8};

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const;
};

struct FixtureParams {
  double eta_d{30.0};
  double eta_rcm{30.0};
  double eta_jl{1.0};
  /// Entry-sphere radius (m); the row bounds the squared distance by its square.
  double d_safe_rcm{0.0025};
  double r_guide{0.010};
  LvfParams lvf;

  bool rcm{true};
  bool shaft_shaft{false};
  bool lvf_rows{false};

  void validate() const;
};

struct TrackingTarget {
  Vector3 translation{Vector3::Zero()};
  UnitQuaternion rotation;
};

/// Switching rotation error vec₄(r − s·r_d), s = sign⟨r, r_d⟩ with ties resolved to +1.
Vector4 rotation_error(const UnitQuaternion& r, const UnitQuaternion& r_d);

/// ½ xᵀ H x + fᵀ x + c.
struct QuadraticObjective {
  MatrixX hessian;
  VectorX linear;
  double constant{0.0};

  explicit QuadraticObjective(Eigen::Index n = 0)
      : hessian(MatrixX::Zero(n, n)), linear(VectorX::Zero(n)) {}

  double value(const VectorX& x) const { return 0.5 * x.dot(hessian * x) + linear.dot(x) + constant; }
  /// Adds weight·‖A x_block + b‖² where x_block starts at column `offset`.
  void add_squared_residual(const MatrixX& a, const VectorX& b, double weight, Eigen::Index offset = 0);
  QuadraticObjective& operator+=(const QuadraticObjective& other);
};

/// Tracking part of either mode over [q̇₁; q̇₂], including the damping terms.
QuadraticObjective build_tracking_objective(const KinematicState& first, const KinematicState& second,
                                            const TrackingTarget& target_first, const TrackingTarget& target_second,
                                            const ControllerParams& params);

/// Guidance error D̃ = D_{l_z,1;t₂} − r_guide² and its Jacobian blocks.
DistanceJacobian guidance_distance(const KinematicState& first, const KinematicState& second, double r_guide);

/// (1 − γ)(‖J₁ q̇₁ + η_guide D̃‖² + ‖J₂ q̇₂ + η_guide D̃‖²).
QuadraticObjective build_guidance_objective(const KinematicState& first, const KinematicState& second,
                                            const ControllerParams& params, double r_guide);

struct RobotContext {
  const RobotModel* model{nullptr};
  KinematicState state;
  Vector3 rcm_center{Vector3::Zero()};
  TrackingTarget target;
};

struct ControlOutput {
  VectorX qdot;
  bool infeasible{false};
  QpStatus status{QpStatus::optimal};
  int iterations{0};
  QpProblem problem;
  ConstraintSet rows;
  /// w − W q̇ per row; negative entries are violations.
  VectorX margins;
  KktResiduals kkt;
  double guidance_error{0.0};
};

/// One controller step. `extra` rows are appended after the fixture rows.
ControlOutput control_step(const RobotContext& first, const RobotContext& second, const ControllerParams& params,
                           const FixtureParams& fixtures, const ConstraintSet& extra = {});

}  // namespace vfix
