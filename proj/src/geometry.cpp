#include "vfix/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vfix {

namespace {
constexpr double kGeometryTolerance = 1e-9;
}

PluckerLine::PluckerLine(const PureQuaternion& direction, const PureQuaternion& moment)
    : l_(direction.vec3()), m_(moment.vec3()) {
  if (std::abs(l_.norm() - 1.0) > kGeometryTolerance) {
    throw std::invalid_argument("PluckerLine: direction norm " + std::to_string(l_.norm()) + " is not 1");
  }
  if (std::abs(l_.dot(m_)) > kGeometryTolerance) {
    throw std::invalid_argument("PluckerLine: direction and moment are not orthogonal");
  }
}

PluckerLine PluckerLine::through(const Vector3& point, const Vector3& direction) {
  const double n = direction.norm();
  if (n == 0.0) {
    throw std::invalid_argument("PluckerLine::through: zero direction");
  }
  const Vector3 l = direction / n;
  return {PureQuaternion(l), PureQuaternion(point.cross(l))};
}

DualQuaternion PluckerLine::dual_quaternion() const { return {Quaternion::pure(l_), Quaternion::pure(m_)}; }

Plane::Plane(const PureQuaternion& normal, double offset) : n_(normal.vec3()), d_(offset) {
  if (std::abs(n_.norm() - 1.0) > kGeometryTolerance) {
    throw std::invalid_argument("Plane: normal norm " + std::to_string(n_.norm()) + " is not 1");
  }
}

DualQuaternion Plane::dual_quaternion() const { return {Quaternion::pure(n_), Quaternion(d_)}; }

Cylinder::Cylinder(const PluckerLine& axis_, double radius_) : axis(axis_), radius(radius_) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("Cylinder: radius must be positive");
  }
}

namespace {

void require_unit_axis(const PureQuaternion& axis, const char* what) {
  if (std::abs(axis.norm() - 1.0) > kGeometryTolerance) {
    throw std::invalid_argument(std::string(what) + ": axis is not a unit vector");
  }
}

}  // namespace

PluckerLine line_from_pose(const UnitDualQuaternion& x, const PureQuaternion& axis) {
  require_unit_axis(axis, "line_from_pose");
  const UnitQuaternion r = x.rotation();
  const Vector3 l = r.rotate(axis.vec3()).normalized();
  const Vector3 t = x.translation().vec3();
  return {PureQuaternion(l), PureQuaternion(t.cross(l))};
}

Plane plane_from_pose(const UnitDualQuaternion& x, const PureQuaternion& normal_axis, double offset) {
  require_unit_axis(normal_axis, "plane_from_pose");
  const Vector3 n = x.rotation().rotate(normal_axis.vec3()).normalized();
  const Vector3 t = x.translation().vec3();
  return {PureQuaternion(n), t.dot(n) + offset};
}

double point_line_sq_distance(const PluckerLine& line, const Vector3& p) {
  return (p.cross(line.direction()) - line.moment()).squaredNorm();
}

double point_plane_signed_distance(const Plane& plane, const Vector3& p) {
  return p.dot(plane.normal()) - plane.offset();
}

double line_line_sq_distance(const PluckerLine& a, const PluckerLine& b) {
  const Vector3 c = a.direction().cross(b.direction());
  const double s = c.norm();
  if (s < kParallelTolerance) {
    return point_line_sq_distance(a, b.point());
  }
  const double num = a.direction().dot(b.moment()) + b.direction().dot(a.moment());
  return num * num / (s * s);
}

double line_line_distance(const PluckerLine& a, const PluckerLine& b) {
  return std::sqrt(line_line_sq_distance(a, b));
}

Vector3 reference_radial_direction(const Vector3& axis) {
  // Pick the basis vector least aligned with the axis.
  Vector3 e = Vector3::UnitX();
  if (std::abs(axis.x()) > std::abs(axis.y())) {
    e = std::abs(axis.y()) > std::abs(axis.z()) ? Vector3::UnitZ() : Vector3::UnitY();
  } else if (std::abs(axis.x()) > std::abs(axis.z())) {
    e = Vector3::UnitZ();
  }
  return (e - axis * axis.dot(e)).normalized();
}

CylinderProjection closest_point_on_cylinder(const Cylinder& c, const Vector3& p, const Vector3& fallback_direction) {
  const Vector3& l = c.axis.direction();
  const Vector3 base = c.axis.point();
  const Vector3 foot = base + l * l.dot(p - base);
  const Vector3 radial = p - foot;
  const double rho = radial.norm();
  if (rho > kAxisDegeneracyTolerance) {
    return {foot + radial * (c.radius / rho), false};
  }
  Vector3 dir = fallback_direction - l * l.dot(fallback_direction);
  if (dir.norm() < kAxisDegeneracyTolerance) {
    dir = reference_radial_direction(l);
  }
  return {foot + dir.normalized() * c.radius, true};
}

}  // namespace vfix
