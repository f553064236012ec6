#include "vfix/vfi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vfix {

namespace {

using Block3 = Eigen::Matrix<double, 3, Eigen::Dynamic>;

Block3 direction_rows(const PoseJacobian& j) { return j.block(1, 0, 3, j.cols()); }
Block3 moment_rows(const PoseJacobian& j) { return j.block(5, 0, 3, j.cols()); }

}  // namespace

DistanceJacobian point_line_distance_jacobians(const PluckerLine& line, const PoseJacobian& line_jacobian,
                                               const Vector3& point, const Block3& point_jacobian) {
  const Vector3& l = line.direction();
  const Vector3 u = point.cross(l) - line.moment();
  DistanceJacobian out;
  out.value = u.squaredNorm();
  out.first = 2.0 * u.transpose() * (skew(point) * direction_rows(line_jacobian) - moment_rows(line_jacobian));
  out.second = -2.0 * u.transpose() * skew(l) * point_jacobian;
  return out;
}

PlaneJacobian plane_jacobian(const PoseJacobian& jx, const UnitDualQuaternion& x, const PureQuaternion& normal_axis) {
  const PoseJacobian jl = line_jacobian(jx, x, normal_axis);
  const Vector3 n = x.rotation().rotate(normal_axis.vec3());
  const Vector3 t = x.translation().vec3();
  PlaneJacobian out(4, jx.cols());
  out.topRows<3>() = direction_rows(jl);
  out.row(3) = n.transpose() * translation_jacobian(jx, x) + t.transpose() * direction_rows(jl);
  return out;
}

DistanceJacobian point_plane_distance_jacobians(const Plane& plane, const PlaneJacobian& plane_jacobian,
                                                const Vector3& point, const Block3& point_jacobian) {
  DistanceJacobian out;
  out.value = point_plane_signed_distance(plane, point);
  out.first = point.transpose() * plane_jacobian.topRows<3>() - plane_jacobian.row(3);
  out.second = plane.normal().transpose() * point_jacobian;
  return out;
}

LineLineDistanceJacobian line_line_distance_jacobians(const PluckerLine& a, const PoseJacobian& ja,
                                                      const PluckerLine& b, const PoseJacobian& jb) {
  const Vector3& l1 = a.direction();
  const Vector3& m1 = a.moment();
  const Vector3& l2 = b.direction();
  const Vector3& m2 = b.moment();
  const Vector3 c = l1.cross(l2);
  LineLineDistanceJacobian out;
  if (c.norm() < kParallelTolerance) {
    // Distance from a point of the second line, p = l₂ × m₂, to the first line.
    const Vector3 p = l2.cross(m2);
    const Block3 jp = -skew(m2) * direction_rows(jb) + skew(l2) * moment_rows(jb);
    const DistanceJacobian d = point_line_distance_jacobians(a, ja, p, jp);
    out.value = d.value;
    out.first = d.first;
    out.second = d.second;
    out.parallel = true;
    return out;
  }
  const double num = l1.dot(m2) + l2.dot(m1);
  const double den = c.squaredNorm();
  out.value = num * num / den;

  const RowJacobian dnum1 = m2.transpose() * direction_rows(ja) + l2.transpose() * moment_rows(ja);
  const RowJacobian dnum2 = l1.transpose() * moment_rows(jb) + m1.transpose() * direction_rows(jb);
  const RowJacobian dden1 = 2.0 * c.transpose() * (-skew(l2)) * direction_rows(ja);
  const RowJacobian dden2 = 2.0 * c.transpose() * skew(l1) * direction_rows(jb);

  out.first = 2.0 * num / den * dnum1 - num * num / (den * den) * dden1;
  out.second = 2.0 * num / den * dnum2 - num * num / (den * den) * dden2;
  return out;
}

DistanceJacobian point_point_distance_jacobians(const Vector3& a, const Block3& ja, const Vector3& b,
                                                const Block3& jb) {
  const Vector3 diff = a - b;
  DistanceJacobian out;
  out.value = diff.squaredNorm();
  out.first = 2.0 * diff.transpose() * ja;
  out.second = -2.0 * diff.transpose() * jb;
  return out;
}

std::string_view to_string(ShaftModel m) { return m == ShaftModel::line ? "line" : "segment"; }

ShaftModel shaft_model_from_string(std::string_view s) {
  if (s == "line") {
    return ShaftModel::line;
  }
  if (s == "segment") {
    return ShaftModel::segment;
  }
  throw std::invalid_argument("unknown shaft model '" + std::string(s) + "' (expected line or segment)");
}

namespace {

struct SegmentParameters {
  double s{0.0};
  double u{0.0};
};

// Closest points of P(s) = p − s·dp and Q(u) = q − u·dq for s, u ∈ [0, length].
SegmentParameters closest_segment_parameters(const Vector3& p, const Vector3& dp, const Vector3& q,
                                             const Vector3& dq, double length, bool parallel) {
  const Vector3 d1 = -dp * length;
  const Vector3 d2 = -dq * length;
  const Vector3 r = p - q;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  const double c = d1.dot(r);
  const double b = d1.dot(d2);
  const double denom = a * e - b * b;
  double s = 0.0;
  if (!parallel && denom > 0.0) {
    s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
  }
  double t = (b * s + f) / e;
  if (t < 0.0) {
    t = 0.0;
    s = std::clamp(-c / a, 0.0, 1.0);
  } else if (t > 1.0) {
    t = 1.0;
    s = std::clamp((b - c) / a, 0.0, 1.0);
  }
  return {s * length, t * length};
}

Block3 shaft_point_jacobian(const KinematicState& k, double s) {
  return k.translation_jacobian - s * k.shaft_direction_jacobian();
}

Vector3 shaft_point(const KinematicState& k, double s) { return k.tip() - s * k.shaft.direction(); }

}  // namespace

ShaftDistance shaft_distance_jacobians(const KinematicState& a, const KinematicState& b, ShaftModel model,
                                       double shaft_length) {
  ShaftDistance out;
  if (model == ShaftModel::line) {
    const LineLineDistanceJacobian d = line_line_distance_jacobians(a.shaft, a.shaft_jacobian, b.shaft, b.shaft_jacobian);
    out.value = d.value;
    out.first = d.first;
    out.second = d.second;
    out.pair = d.parallel ? ShaftDistance::Case::parallel : ShaftDistance::Case::line_line;
    return out;
  }
  if (!(shaft_length > 0.0)) {
    throw std::invalid_argument("shaft_distance_jacobians: shaft length must be positive");
  }
  const bool parallel = a.shaft.direction().cross(b.shaft.direction()).norm() < kParallelTolerance;
  const SegmentParameters prm =
      closest_segment_parameters(a.tip(), a.shaft.direction(), b.tip(), b.shaft.direction(), shaft_length, parallel);
  out.first_parameter = prm.s;
  out.second_parameter = prm.u;
  const bool a_interior = prm.s > 0.0 && prm.s < shaft_length;
  const bool b_interior = prm.u > 0.0 && prm.u < shaft_length;

  if (a_interior && b_interior && !parallel) {
    const LineLineDistanceJacobian d = line_line_distance_jacobians(a.shaft, a.shaft_jacobian, b.shaft, b.shaft_jacobian);
    out.value = d.value;
    out.first = d.first;
    out.second = d.second;
    out.pair = ShaftDistance::Case::line_line;
  } else if (a_interior) {
    // Point of the second shaft against the first line.
    const DistanceJacobian d = point_line_distance_jacobians(a.shaft, a.shaft_jacobian, shaft_point(b, prm.u),
                                                             shaft_point_jacobian(b, prm.u));
    out.value = d.value;
    out.first = d.first;
    out.second = d.second;
    out.pair = parallel && b_interior ? ShaftDistance::Case::parallel : ShaftDistance::Case::line_point;
  } else if (b_interior) {
    const DistanceJacobian d = point_line_distance_jacobians(b.shaft, b.shaft_jacobian, shaft_point(a, prm.s),
                                                             shaft_point_jacobian(a, prm.s));
    out.value = d.value;
    out.first = d.second;
    out.second = d.first;
    out.pair = ShaftDistance::Case::point_line;
  } else {
    const DistanceJacobian d = point_point_distance_jacobians(shaft_point(a, prm.s), shaft_point_jacobian(a, prm.s),
                                                              shaft_point(b, prm.u), shaft_point_jacobian(b, prm.u));
    out.value = d.value;
    out.first = d.first;
    out.second = d.second;
    out.pair = ShaftDistance::Case::point_point;
  }
  return out;
}

std::string_view to_string(RowTag tag) {
  switch (tag) {
    case RowTag::joint_limit:
      return "joint_limit";
    case RowTag::rcm:
      return "rcm";
    case RowTag::shaft_shaft:
      return "shaft_shaft";
    case RowTag::lvf_cylinder:
      return "lvf_cylinder";
    case RowTag::lvf_plane_min:
      return "lvf_plane_min";
    case RowTag::lvf_plane_max:
      return "lvf_plane_max";
    case RowTag::plane:
      return "plane";
  }
  return "unknown";
}

void ConstraintSet::append(const ConstraintSet& other) {
  rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
}

MatrixX ConstraintSet::matrix(Eigen::Index columns) const {
  if (!rows_.empty()) {
    columns = rows_.front().coefficients.size();
  }
  MatrixX w(static_cast<Eigen::Index>(rows_.size()), columns);
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    if (rows_[k].coefficients.size() != columns) {
      throw std::invalid_argument("ConstraintSet: rows have different widths");
    }
    w.row(static_cast<Eigen::Index>(k)) = rows_[k].coefficients;
  }
  return w;
}

VectorX ConstraintSet::bounds() const {
  VectorX w(static_cast<Eigen::Index>(rows_.size()));
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    w[static_cast<Eigen::Index>(k)] = rows_[k].bound;
  }
  return w;
}

ZoneSpec ZoneSpec::constant(ZoneKind kind, double gain, double safe_distance) {
  ZoneSpec z;
  z.kind = kind;
  z.gain = gain;
  z.safe_distance = [safe_distance](double) { return safe_distance; };
  z.safe_distance_rate = [](double) { return 0.0; };
  return z;
}

VfiRow vfi_row(const RowJacobian& distance_jacobian, double distance, const ZoneSpec& zone, double time, RowTag tag,
               double residual) {
  if (zone.gain < 0.0) {
    throw std::invalid_argument("vfi_row: negative gain");
  }
  const double d_safe = zone.safe_distance ? zone.safe_distance(time) : 0.0;
  const double d_safe_rate = zone.safe_distance_rate ? zone.safe_distance_rate(time) : 0.0;
  const double zeta_safe = zone.feed_forward ? residual - d_safe_rate : 0.0;
  VfiRow row;
  row.tag = tag;
  row.distance = distance;
  row.safe_distance = d_safe;
  if (zone.kind == ZoneKind::restricted) {
    row.coefficients = -distance_jacobian;
    row.bound = zone.gain * (distance - d_safe) + zeta_safe;
  } else {
    row.coefficients = distance_jacobian;
    row.bound = zone.gain * (d_safe - distance) - zeta_safe;
  }
  return row;
}

RowJacobian stack_row(const StackLayout& layout, const RowJacobian& first, const RowJacobian& second) {
  RowJacobian row = RowJacobian::Zero(layout.columns());
  row.segment(0, layout.first_dof) = first;
  row.segment(layout.first_dof, layout.second_dof) = second;
  return row;
}

RowJacobian stack_row(const StackLayout& layout, int robot, const RowJacobian& block) {
  RowJacobian row = RowJacobian::Zero(layout.columns());
  row.segment(layout.offset(robot), layout.dof(robot)) = block;
  return row;
}

VfiRow rcm_constraint(const KinematicState& robot, int robot_index, const StackLayout& layout, const Vector3& center,
                      double safe_sq_radius, double gain) {
  const DistanceJacobian d =
      point_line_distance_jacobians(robot.shaft, robot.shaft_jacobian, center, Block3::Zero(3, 0));
  return vfi_row(stack_row(layout, robot_index, d.first), d.value,
                 ZoneSpec::constant(ZoneKind::safe, gain, safe_sq_radius), 0.0, RowTag::rcm);
}

VfiRow shaft_shaft_constraint(const KinematicState& first, const KinematicState& second, const StackLayout& layout,
                              double r_min, double gain, ShaftModel model, double shaft_length) {
  if (!(r_min > 0.0)) {
    throw std::invalid_argument("shaft_shaft_constraint: r_min must be positive");
  }
  const ShaftDistance d = shaft_distance_jacobians(first, second, model, shaft_length);
  return vfi_row(stack_row(layout, d.first, d.second), d.value,
                 ZoneSpec::constant(ZoneKind::restricted, gain, r_min * r_min), 0.0, RowTag::shaft_shaft);
}

ConstraintSet lvf_constraints(const KinematicState& first, const KinematicState& second, const StackLayout& layout,
                              const LvfParams& params, double gain) {
  if (!(params.d_pi_min < params.d_pi_max)) {
    throw std::invalid_argument("lvf_constraints: d_pi_min must be smaller than d_pi_max");
  }
  if (!(params.r_max > 0.0)) {
    throw std::invalid_argument("lvf_constraints: r_max must be positive");
  }
  ConstraintSet set;
  set.add(shaft_shaft_constraint(first, second, layout, params.r_min, gain, params.shaft_model, params.shaft_length));

  const Vector3 tip = second.tip();
  const DistanceJacobian cyl =
      point_line_distance_jacobians(first.shaft, first.shaft_jacobian, tip, second.translation_jacobian);
  set.add(vfi_row(stack_row(layout, cyl.first, cyl.second), cyl.value,
                  ZoneSpec::constant(ZoneKind::safe, gain, params.r_max * params.r_max), 0.0, RowTag::lvf_cylinder));

  const PureQuaternion axis(0.0, 0.0, 1.0);
  const PlaneJacobian jp = plane_jacobian(first.pose_jacobian, first.pose, axis);
  // The offsets live in the planes, so each band row bounds the plain signed distance.
  const Plane lower = plane_from_pose(first.pose, axis, params.d_pi_min);
  const DistanceJacobian dmin = point_plane_distance_jacobians(lower, jp, tip, second.translation_jacobian);
  set.add(vfi_row(stack_row(layout, dmin.first, dmin.second), dmin.value,
                  ZoneSpec::constant(ZoneKind::restricted, gain, 0.0), 0.0, RowTag::lvf_plane_min));

  const Plane upper = plane_from_pose(first.pose, axis, params.d_pi_max);
  const DistanceJacobian dmax = point_plane_distance_jacobians(upper, jp, tip, second.translation_jacobian);
  set.add(vfi_row(stack_row(layout, dmax.first, dmax.second), dmax.value,
                  ZoneSpec::constant(ZoneKind::safe, gain, 0.0), 0.0, RowTag::lvf_plane_max));
  return set;
}

ConstraintSet joint_limit_constraints(const VectorX& q, const VectorX& q_min, const VectorX& q_max, double gain,
                                      int robot_index, const StackLayout& layout, double max_speed) {
  if (q.size() != layout.dof(robot_index) || q_min.size() != q.size() || q_max.size() != q.size()) {
    throw std::invalid_argument("joint_limit_constraints: dimension mismatch");
  }
  ConstraintSet set;
  for (Eigen::Index j = 0; j < q.size(); ++j) {
    RowJacobian unit = RowJacobian::Zero(q.size());
    unit[j] = 1.0;
    VfiRow upper;
    upper.tag = RowTag::joint_limit;
    upper.coefficients = stack_row(layout, robot_index, unit);
    upper.bound = std::min(gain * (q_max[j] - q[j]), max_speed);
    upper.distance = q_max[j] - q[j];
    set.add(upper);

    VfiRow lower;
    lower.tag = RowTag::joint_limit;
    lower.coefficients = stack_row(layout, robot_index, RowJacobian(-unit));
    lower.bound = std::min(gain * (q[j] - q_min[j]), max_speed);
    lower.distance = q[j] - q_min[j];
    set.add(lower);
  }
  return set;
}

}  // namespace vfix
