#pragma once

#include "vfix/controller.hpp"
#include "vfix/haptics.hpp"
#include "vfix/scenario.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace vfix {

struct RobotSlot {
  RobotModel model;
  JointState joints;
  Vector3 rcm_center{Vector3::Zero()};
};

struct World {
  std::array<RobotSlot, 2> robots;
  double time{0.0};
  double dt{0.004};
  /// Joint positions pushed back inside their limits by step_simulation.
  int clamp_events{0};

  KinematicState state(int robot) const;
};

/// q ← q + q̇ Δt for both robots (stacked q̇), time advanced by Δt. Positions leaving the
/// joint range are clamped and counted in clamp_events.
World step_simulation(const World& world, const VectorX& qdot, double dt);

/// Joint configuration placing the tooltip at `tip` with the shaft passing through `rcm`.
/// Damped least squares from `guess`; throws std::runtime_error if it does not converge.
VectorX solve_port_configuration(const RobotModel& model, const Vector3& tip, const Vector3& rcm,
                                 const VectorX& guess);

/// Slave-frame targets for both tooltips at time t.
struct ScriptSample {
  Vector3 first{Vector3::Zero()};
  Vector3 second{Vector3::Zero()};
};

/// Master displacements relative to the start; slave targets are initial tip + MS·displacement.
class MasterScript {
 public:
  MasterScript() = default;
  /// `origin` is the slave tooltip pair the master displacement is measured from.
  MasterScript(std::function<ScriptSample(double)> desired, double motion_scaling, const ScriptSample& origin);

  /// Master displacement from the initial master pose.
  ScriptSample master(double t) const;
  /// Slave targets given the initial tooltip positions.
  ScriptSample slave_targets(double t, const ScriptSample& initial_tips) const;
  /// Desired slave path (before the master round trip).
  ScriptSample desired(double t) const { return desired_(t); }
  double motion_scaling() const { return ms_; }

 private:
  std::function<ScriptSample(double)> desired_;
  ScriptSample origin_;
  double ms_{1.0};
};

/// Frame of the looping task: first tooltip, its shaft direction, and the radial direction
/// toward the second entry point.
struct LoopFrame {
  Vector3 center{Vector3::Zero()};
  Vector3 axis{Vector3::UnitZ()};
  Vector3 radial{Vector3::UnitX()};
  Vector3 binormal{Vector3::UnitY()};
  Vector3 at(double radius, double phase, double depth) const;
};

/// Seeded band-limited noise: a sum of sinusoids with random frequencies and phases, scaled to
/// the requested standard deviation.
class BandLimitedNoise {
 public:
  BandLimitedNoise() = default;
  BandLimitedNoise(std::uint64_t seed, double std_dev, int components, double f_min, double f_max);
  double operator()(double t) const;

 private:
  std::vector<double> amplitude_;
  std::vector<double> frequency_;
  std::vector<double> phase_;
};

struct Scene {
  World world;
  LoopFrame frame;
  MasterScript script;
  ScriptKind script_kind{ScriptKind::hold};
};

/// Places the robots, builds the master script and solves the initial configurations.
/// Model-file and geometry problems throw before any simulation step.
Scene make_scene(const ScenarioConfig& config);

struct CollisionCheck {
  bool collision{false};
  double distance{0.0};
};

/// Discrete-time VFIs hold a boundary only up to O(Δt); contact this shallow is not a collision. m.
inline constexpr double kCollisionTolerance = 1e-6;

/// Closer than r_min − kCollisionTolerance under the given shaft model.
CollisionCheck detect_collision(const KinematicState& a, const KinematicState& b, double r_min, ShaftModel model,
                                double shaft_length);
CollisionCheck detect_collision(const World& world, double r_min, ShaftModel model, double shaft_length);

/// One row per step; a fixed header and 17 significant digits.
class TrajectoryLog {
 public:
  explicit TrajectoryLog(std::vector<std::string> header = {});
  void append(std::vector<double> row);
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  std::size_t column(const std::string& name) const;
  std::string to_csv() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

struct Metrics {
  std::string mode;
  std::uint64_t seed{0};
  int steps{0};
  double completion_time{0.0};
  /// |dist(t₂, first shaft axis) − r_guide| in mm.
  double mean_error_mm{0.0};
  double median_error_mm{0.0};
  double max_error_mm{0.0};
  int collision_count{0};
  double min_shaft_distance_mm{0.0};
  /// max(D_rcm − D_safe,rcm) over both robots and all steps (m²); negative when never reached.
  double max_rcm_excess{0.0};
  /// max(D_{l_z,1;t₂} − r_max²) (m²).
  double max_cylinder_excess{0.0};
  /// Largest distance outside the plane band (mm).
  double max_band_excess_mm{0.0};
  /// Largest W q̇ − w over all rows and steps.
  double max_constraint_violation{0.0};
  double max_kkt_residual{0.0};
  int infeasible_steps{0};
  int clamp_events{0};
  /// Plane scenarios: largest |d − d_plane| after the settle time (mm).
  double max_plane_deviation_mm{0.0};

  std::string to_json() const;
};

struct ScenarioResult {
  TrajectoryLog log;
  Metrics metrics;
};

ScenarioResult run_scenario(const ScenarioConfig& config);

/// Runs `config` in the given mode.
Metrics looping_benchmark(const ScenarioConfig& config, ScenarioMode mode);

struct PlaneBenchmarkReport {
  Metrics static_bound;
  Metrics vfi;
  /// 2π·f·A (m/s).
  double plane_speed{0.0};
  /// Columns: t, plane, static distance, VFI distance (signed tooltip-to-plane, m).
  TrajectoryLog trace;

  double ratio() const;
  std::string to_json() const;
};

PlaneBenchmarkReport dynamic_plane_benchmark(const ScenarioConfig& config);

}  // namespace vfix
