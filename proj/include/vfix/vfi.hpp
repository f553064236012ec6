#pragma once

#include "vfix/geometry.hpp"
#include "vfix/kinematics.hpp"

#include <functional>
#include <limits>
#include <string_view>
#include <vector>

namespace vfix {

// ---------------------------------------------------------------------------------------------
// Distance Jacobians
//
// Every distance below depends on two primitives. `first` is the row block for the joints that
// move the first primitive and `second` the block for the second primitive, so that
//   ḋ = first · q̇_first + second · q̇_second.
// Squared distances are used for point–line, line–line and point–point pairs; plane distances
// are signed.
// ---------------------------------------------------------------------------------------------

struct DistanceJacobian {
  double value{0.0};
  RowJacobian first;
  RowJacobian second;
};

/// Squared distance from `point` to `line`. `line_jacobian` is the 8×n vec₈ line rate,
/// `point_jacobian` the 3×m point rate.
DistanceJacobian point_line_distance_jacobians(const PluckerLine& line, const PoseJacobian& line_jacobian,
                                               const Vector3& point,
                                               const Eigen::Matrix<double, 3, Eigen::Dynamic>& point_jacobian);

/// Rate of a plane attached to a pose: rows 0–2 normal rate, row 3 offset rate.
using PlaneJacobian = Eigen::Matrix<double, 4, Eigen::Dynamic>;

PlaneJacobian plane_jacobian(const PoseJacobian& jx, const UnitDualQuaternion& x, const PureQuaternion& normal_axis);

/// Signed distance from `point` to `plane`.
DistanceJacobian point_plane_distance_jacobians(const Plane& plane, const PlaneJacobian& plane_jacobian,
                                                const Vector3& point,
                                                const Eigen::Matrix<double, 3, Eigen::Dynamic>& point_jacobian);

struct LineLineDistanceJacobian : DistanceJacobian {
  bool parallel{false};
};

/// Squared distance between two infinite lines. Parallel lines (‖l₁ × l₂‖ below
/// kParallelTolerance) use the point-to-line form on a point of the second line.
LineLineDistanceJacobian line_line_distance_jacobians(const PluckerLine& a, const PoseJacobian& ja,
                                                      const PluckerLine& b, const PoseJacobian& jb);

DistanceJacobian point_point_distance_jacobians(const Vector3& a,
                                                const Eigen::Matrix<double, 3, Eigen::Dynamic>& ja,
                                                const Vector3& b,
                                                const Eigen::Matrix<double, 3, Eigen::Dynamic>& jb);

/// How an instrument shaft is modeled in shaft–shaft distances.
enum class ShaftModel {
  /// Infinite line along the effector z-axis.
  line,
  /// Segment from the tooltip back along the shaft for a fixed length.
  segment,
};

std::string_view to_string(ShaftModel m);
ShaftModel shaft_model_from_string(std::string_view s);

struct ShaftDistance : DistanceJacobian {
  enum class Case { line_line, parallel, point_line, line_point, point_point };
  Case pair{Case::line_line};
  /// Closest-point parameters, measured from each tooltip back along its shaft (m).
  double first_parameter{0.0};
  double second_parameter{0.0};
};

/// Squared shaft–shaft distance of two robots. For ShaftModel::segment the closest pair of
/// points on the two segments [tip, tip − length·l] selects which distance function is active.
ShaftDistance shaft_distance_jacobians(const KinematicState& a, const KinematicState& b, ShaftModel model,
                                       double shaft_length);

// ---------------------------------------------------------------------------------------------
// Inequality rows
// ---------------------------------------------------------------------------------------------

enum class RowTag { joint_limit, rcm, shaft_shaft, lvf_cylinder, lvf_plane_min, lvf_plane_max, plane };

std::string_view to_string(RowTag tag);

/// One row of W q̇ ≤ w over the stacked velocity [q̇₁; q̇₂].
struct VfiRow {
  RowJacobian coefficients;
  double bound{0.0};
  RowTag tag{RowTag::joint_limit};
  /// Distance the row was built from and its safe value, for logging.
  double distance{0.0};
  double safe_distance{0.0};
};

class ConstraintSet {
 public:
  void add(VfiRow row) { rows_.push_back(std::move(row)); }
  void append(const ConstraintSet& other);

  const std::vector<VfiRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  /// Assembled W (rows × columns); `columns` is used when the set is empty.
  MatrixX matrix(Eigen::Index columns) const;
  VectorX bounds() const;

 private:
  std::vector<VfiRow> rows_;
};

enum class ZoneKind { restricted, safe };

/// Restricted zones keep d ≥ d_safe, safe zones keep d ≤ d_safe.
struct ZoneSpec {
  ZoneKind kind{ZoneKind::restricted};
  double gain{0.0};
  std::function<double(double)> safe_distance;
  std::function<double(double)> safe_distance_rate;
  /// When false the residual ζ_safe is forced to zero (a static-bound damper).
  bool feed_forward{true};

  static ZoneSpec constant(ZoneKind kind, double gain, double safe_distance);
};

/// Builds −J_d q̇ ≤ η d̃ + ζ_safe (restricted) or J_d q̇ ≤ η d̃ − ζ_safe (safe), with
/// ζ_safe = ζ − ḋ_safe and `residual` = ζ, the part of ḋ not explained by the joints.
VfiRow vfi_row(const RowJacobian& distance_jacobian, double distance, const ZoneSpec& zone, double time,
               RowTag tag, double residual = 0.0);

/// Column layout of the stacked velocity for two robots.
struct StackLayout {
  int first_dof{0};
  int second_dof{0};
  int columns() const { return first_dof + second_dof; }
  int offset(int robot) const { return robot == 0 ? 0 : first_dof; }
  int dof(int robot) const { return robot == 0 ? first_dof : second_dof; }
};

/// Places per-robot blocks into a full-width row.
RowJacobian stack_row(const StackLayout& layout, const RowJacobian& first, const RowJacobian& second);
RowJacobian stack_row(const StackLayout& layout, int robot, const RowJacobian& block);

/// Entry-sphere row keeping the squared shaft-to-center distance below `safe_sq_radius`.
VfiRow rcm_constraint(const KinematicState& robot, int robot_index, const StackLayout& layout,
                      const Vector3& center, double safe_sq_radius, double gain);

/// Restricted zone on the squared shaft–shaft distance with safe value r_min².
VfiRow shaft_shaft_constraint(const KinematicState& first, const KinematicState& second, const StackLayout& layout,
                              double r_min, double gain, ShaftModel model, double shaft_length);

struct LvfParams {
  double r_max{0.020};
  double d_pi_min{-0.008};
  double d_pi_max{0.010};
  double r_min{0.0035};
  ShaftModel shaft_model{ShaftModel::segment};
  double shaft_length{0.3};
};

/// Shaft–shaft, cylinder and the two band rows of the looping fixtures attached to robot 1.
/// Throws std::invalid_argument when d_pi_min ≥ d_pi_max or r_max ≤ 0.
ConstraintSet lvf_constraints(const KinematicState& first, const KinematicState& second, const StackLayout& layout,
                              const LvfParams& params, double gain);

/// Velocity dampers q̇_j ≤ η(q_max − q_j) and −q̇_j ≤ η(q_j − q_min). A finite `max_speed`
/// additionally caps each bound.
ConstraintSet joint_limit_constraints(const VectorX& q, const VectorX& q_min, const VectorX& q_max, double gain,
                                      int robot_index, const StackLayout& layout,
                                      double max_speed = std::numeric_limits<double>::infinity());

}  // namespace vfix
