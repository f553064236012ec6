#pragma once

#include "vfix/quaternion.hpp"

namespace vfix {

/// Plücker line l + ε m with unit direction l and moment m = p × l for any point p on the line.
class PluckerLine {
 public:
  PluckerLine() = default;
  /// Validates the Plücker conditions ‖l‖ = 1 and ⟨l, m⟩ = 0 (tolerance 1e-9).
  PluckerLine(const PureQuaternion& direction, const PureQuaternion& moment);
  static PluckerLine through(const Vector3& point, const Vector3& direction);

  const Vector3& direction() const { return l_; }
  const Vector3& moment() const { return m_; }
  /// Closest point on the line to the origin, l × m.
  Vector3 point() const { return l_.cross(m_); }
  DualQuaternion dual_quaternion() const;

 private:
  Vector3 l_{Vector3::UnitZ()};
  Vector3 m_{Vector3::Zero()};
};

/// Plane n + ε d with unit normal n and d = ⟨p, n⟩ for any point p on the plane.
class Plane {
 public:
  Plane() = default;
  Plane(const PureQuaternion& normal, double offset);

  const Vector3& normal() const { return n_; }
  double offset() const { return d_; }
  DualQuaternion dual_quaternion() const;

 private:
  Vector3 n_{Vector3::UnitZ()};
  double d_{0.0};
};

struct Cylinder {
  Cylinder(const PluckerLine& axis_, double radius_);
  PluckerLine axis;
  double radius;
};

/// Line along `axis` (expressed in the pose frame) through the pose's origin.
PluckerLine line_from_pose(const UnitDualQuaternion& x, const PureQuaternion& axis);
/// Plane with normal r·normal_axis·r* passing at signed `offset` from the pose origin.
Plane plane_from_pose(const UnitDualQuaternion& x, const PureQuaternion& normal_axis, double offset);

double point_line_sq_distance(const PluckerLine& line, const Vector3& p);
/// Positive on the side the normal points to.
double point_plane_signed_distance(const Plane& plane, const Vector3& p);

/// Below this ‖l₁ × l₂‖ two lines are treated as parallel.
inline constexpr double kParallelTolerance = 1e-9;

double line_line_distance(const PluckerLine& a, const PluckerLine& b);
double line_line_sq_distance(const PluckerLine& a, const PluckerLine& b);

struct CylinderProjection {
  Vector3 point;
  /// The query point was on the axis; `point` used the fallback radial direction.
  bool degenerate{false};
};

/// Below this radial distance (m) the radial direction is considered undefined.
inline constexpr double kAxisDegeneracyTolerance = 1e-12;

/// Unit vector orthogonal to `axis`, used when a radial direction is undefined.
Vector3 reference_radial_direction(const Vector3& axis);

/// Closest point on the cylinder surface. `fallback_direction`, when nonzero, replaces the radial
/// direction for points on the axis; otherwise reference_radial_direction() is used.
CylinderProjection closest_point_on_cylinder(const Cylinder& c, const Vector3& p,
                                             const Vector3& fallback_direction = Vector3::Zero());

}  // namespace vfix
