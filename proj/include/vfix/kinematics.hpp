#pragma once

#include "vfix/geometry.hpp"
#include "vfix/quaternion.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

namespace vfix {

using VectorX = Eigen::VectorXd;
using MatrixX = Eigen::MatrixXd;
using PoseJacobian = Eigen::Matrix<double, 8, Eigen::Dynamic>;
using TranslationJacobian = Eigen::Matrix<double, 3, Eigen::Dynamic>;
using RotationJacobian = Eigen::Matrix<double, 4, Eigen::Dynamic>;
using RowJacobian = Eigen::Matrix<double, 1, Eigen::Dynamic>;

/// Standard Denavit–Hartenberg revolute joint: Rz(θ + theta) Tz(d) Tx(a) Rx(alpha). SI units.
struct DhJoint {
  double theta{0.0};
  double d{0.0};
  double a{0.0};
  double alpha{0.0};
};

struct RobotModel {
  std::string name;
  std::vector<DhJoint> joints;
  UnitDualQuaternion base;
  UnitDualQuaternion effector;
  VectorX q_min;
  VectorX q_max;

  int dof() const { return static_cast<int>(joints.size()); }
  /// Throws std::invalid_argument if the limits are inconsistent with the joint list.
  void validate() const;
};

/// Joint configuration q (rad) and its companion velocity q̇ (rad/s).
struct JointState {
  VectorX q;
  VectorX qdot;

  JointState() = default;
  explicit JointState(VectorX q_) : q(std::move(q_)), qdot(VectorX::Zero(q.size())) {}
};

/// Built-in 6R reference arm with a straight instrument on the flange.
RobotModel reference_model();

/// Loads a robot model file (JSON, millimeters and degrees). Throws std::runtime_error with the
/// offending field on malformed input.
RobotModel load_robot_model(const std::filesystem::path& path);
RobotModel robot_model_from_json_text(const std::string& text);
std::string robot_model_to_json_text(const RobotModel& model);

UnitDualQuaternion forward_kinematics(const RobotModel& model, const VectorX& q);
/// vec₈(ẋ) = J q̇.
PoseJacobian pose_jacobian(const RobotModel& model, const VectorX& q);
/// vec₃(ṫ) = J_t q̇.
TranslationJacobian translation_jacobian(const PoseJacobian& jx, const UnitDualQuaternion& x);
/// vec₄(ṙ) = J_r q̇; the primary block of the pose Jacobian.
RotationJacobian rotation_jacobian(const PoseJacobian& jx);
/// vec₈ rate of line_from_pose(x, axis): rows 0–3 direction, rows 4–7 moment.
PoseJacobian line_jacobian(const PoseJacobian& jx, const UnitDualQuaternion& x,
                           const PureQuaternion& axis = PureQuaternion(0.0, 0.0, 1.0));

/// Everything the constraint builders need for one robot at one configuration. The instrument
/// shaft is the effector z-axis and the tooltip is the effector origin.
struct KinematicState {
  VectorX q;
  UnitDualQuaternion pose;
  PoseJacobian pose_jacobian;
  TranslationJacobian translation_jacobian;
  RotationJacobian rotation_jacobian;
  PluckerLine shaft;
  PoseJacobian shaft_jacobian;

  int dof() const { return static_cast<int>(q.size()); }
  Vector3 tip() const { return pose.translation().vec3(); }
  /// Direction-rate rows (3×n) of the shaft Jacobian.
  Eigen::Matrix<double, 3, Eigen::Dynamic> shaft_direction_jacobian() const {
    return shaft_jacobian.block(1, 0, 3, shaft_jacobian.cols());
  }
  Eigen::Matrix<double, 3, Eigen::Dynamic> shaft_moment_jacobian() const {
    return shaft_jacobian.block(5, 0, 3, shaft_jacobian.cols());
  }
};

KinematicState evaluate_kinematics(const RobotModel& model, const VectorX& q);

inline constexpr double kDegree = 0.017453292519943295;
inline constexpr double kMillimeter = 1e-3;

}  // namespace vfix
