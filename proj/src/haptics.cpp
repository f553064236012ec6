#include "vfix/haptics.hpp"

#include <cmath>
#include <stdexcept>

namespace vfix {

void ImpedanceParams::validate() const {
  if (!(eta_f > 0.0) || !std::isfinite(eta_f)) {
    throw std::invalid_argument("eta_f must be positive");
  }
  if (!(eta_v >= 0.0) || !std::isfinite(eta_v)) {
    throw std::invalid_argument("eta_v must be non-negative");
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("gamma must lie in [0, 1]");
  }
}

GuidanceError guidance_translation_error(const Cylinder& guide, const Vector3& t2, const Vector3& fallback_direction) {
  const CylinderProjection c = closest_point_on_cylinder(guide, t2, fallback_direction);
  return {t2 - c.point, c.degenerate};
}

MasterForces master_forces(const MasterState& s, const ImpedanceParams& p) {
  MasterForces f;
  f.first.tracking = -p.eta_f * p.gamma * s.tracking_error_first;
  f.first.guidance = -p.eta_f * (1.0 - p.gamma) * s.guidance_error;
  f.first.damping = -p.eta_v * s.velocity_first;
  f.second.tracking = -p.eta_f * p.gamma * s.tracking_error_second;
  f.second.guidance = p.eta_f * (1.0 - p.gamma) * s.guidance_error;
  f.second.damping = -p.eta_v * s.velocity_second;
  return f;
}

MasterState to_master_frame(const MasterState& s, const ImpedanceParams& p) {
  auto rot = [&](const Vector3& v) { return p.view.rotate(v); };
  MasterState m;
  m.velocity_first = rot(s.velocity_first);
  m.velocity_second = rot(s.velocity_second);
  m.tracking_error_first = rot(s.tracking_error_first);
  m.tracking_error_second = rot(s.tracking_error_second);
  m.guidance_error = rot(s.guidance_error);
  return m;
}

}  // namespace vfix
