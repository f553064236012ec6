#pragma once

#include "vfix/controller.hpp"
#include "vfix/haptics.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace vfix {

/// Configuration problems; messages start with the dotted path of the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ScenarioMode { A1_entry_only, A2_shaft_shaft, A3_lvf_tgc, plane_static_constraint, plane_vfi };

std::string_view to_string(ScenarioMode m);
ScenarioMode scenario_mode_from_string(std::string_view s);
bool is_plane_mode(ScenarioMode m);

enum class ScriptKind { automatic, hold, loop, adversarial, circle };

std::string_view to_string(ScriptKind k);
ScriptKind script_kind_from_string(std::string_view s);

/// Control and fixture parameters under their table names. Lengths in mm, gains in SI.
struct TableParams {
  double alpha{0.999};
  double beta{0.6};
  double gamma{0.01};
  double eta{150.0};
  double eta_d{30.0};
  double eta_rcm{30.0};
  double eta_guide{1.0};
  double lambda{0.02};
  double eta_f{50.0};
  double eta_v{0.5};
  double ms{0.5};
  double r_min{3.5};
  double r_max{20.0};
  double r_guide{10.0};
  double d_safe_rcm{2.5};
  double d_pi_min{-8.0};
  double d_pi_max{10.0};
  bool operator==(const TableParams&) const = default;
};

/// Master script. Lengths in mm, times in s, frequencies in Hz.
struct ScriptConfig {
  ScriptKind kind{ScriptKind::automatic};
  double loops{2.0};
  /// Depth of the loop along the first shaft relative to its tip: mid − amplitude·cos φ.
  double depth_mid{2.0};
  double depth_amplitude{5.0};
  /// Operator tremor: band-limited radial noise of this standard deviation.
  double noise_amplitude{2.0};
  int noise_components{8};
  double noise_min_frequency{0.05};
  double noise_max_frequency{0.5};
  /// Operator lapses: brief drifts of the commanded tip toward the first shaft.
  int lapses_per_loop{1};
  double lapse_radius{0.0};
  double lapse_depth{-5.0};
  double lapse_duration{3.0};
  /// Straight pass through the first shaft at this depth.
  double adversarial_depth{-5.0};
  double adversarial_span{25.0};
  /// Dynamic-plane benchmark.
  double circle_radius{10.0};
  double circle_period{10.0};
  double plane_amplitude{10.0};
  double plane_frequency{0.1};
  double plane_initial_offset{30.0};
  double settle_time{5.0};
  bool operator==(const ScriptConfig&) const = default;
};

/// Entry points sit at (∓lateral, 0, height) around the workspace origin. mm.
struct SceneConfig {
  double rcm_lateral{60.0};
  double rcm_height{60.0};
  /// Robot model files; empty selects the built-in reference arm.
  std::string robot_first;
  std::string robot_second;
  bool operator==(const SceneConfig&) const = default;
};

struct ScenarioConfig {
  int schema{1};
  ScenarioMode mode{ScenarioMode::A3_lvf_tgc};
  TableParams table;
  double eta_jl{1.0};
  ShaftModel shaft_model{ShaftModel::segment};
  double shaft_length{300.0};
  double steps_per_second{250.0};
  double duration{60.0};
  std::uint64_t seed{1};
  ScriptConfig script;
  SceneConfig scene;
  bool operator==(const ScenarioConfig&) const = default;

  double dt() const { return 1.0 / steps_per_second; }
  ScriptKind resolved_script() const;
};

inline constexpr int kConfigSchema = 1;

/// Parses JSON text, applies `key=value` overrides (dotted paths) and validates.
ScenarioConfig parse_scenario_text(const std::string& text, const std::vector<std::string>& overrides = {});
ScenarioConfig parse_scenario(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});
/// Effective configuration as JSON; parse_scenario_text() of it reproduces `config`.
std::string dump_scenario(const ScenarioConfig& config);
/// Throws ConfigError.
void validate_scenario(const ScenarioConfig& config);

/// SI parameter blocks for the controller, fixtures and master forces.
ControllerParams controller_params(const ScenarioConfig& config);
FixtureParams fixture_params(const ScenarioConfig& config);
ImpedanceParams impedance_params(const ScenarioConfig& config);

}  // namespace vfix
