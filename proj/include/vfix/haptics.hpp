#pragma once

#include "vfix/geometry.hpp"

namespace vfix {

struct ImpedanceParams {
  double eta_f{50.0};   // N/m
  double eta_v{0.5};    // N·s/m
  double gamma{0.01};
  /// Rotation from the slave frame into the master (camera) frame.
  UnitQuaternion view;

  void validate() const;
};

/// Errors and master velocities, already in the master frame.
struct MasterState {
  Vector3 velocity_first{Vector3::Zero()};
  Vector3 velocity_second{Vector3::Zero()};
  Vector3 tracking_error_first{Vector3::Zero()};
  Vector3 tracking_error_second{Vector3::Zero()};
  Vector3 guidance_error{Vector3::Zero()};
};

struct GuidanceError {
  Vector3 error{Vector3::Zero()};
  /// t₂ was on the guide axis and the radial direction came from the fallback.
  bool degenerate{false};
};

/// t₂ − t_c with t_c the closest point of the guide surface.
GuidanceError guidance_translation_error(const Cylinder& guide, const Vector3& t2,
                                         const Vector3& fallback_direction = Vector3::Zero());

struct ForceComponents {
  Vector3 tracking{Vector3::Zero()};
  Vector3 guidance{Vector3::Zero()};
  Vector3 damping{Vector3::Zero()};
  Vector3 total() const { return tracking + guidance + damping; }
};

struct MasterForces {
  ForceComponents first;
  ForceComponents second;
};

MasterForces master_forces(const MasterState& state, const ImpedanceParams& params);

/// Rotates slave-frame vectors into the master frame with params.view.
MasterState to_master_frame(const MasterState& slave_frame, const ImpedanceParams& params);

}  // namespace vfix
