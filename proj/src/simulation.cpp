#include "vfix/simulation.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>

namespace vfix {

KinematicState World::state(int robot) const {
  const RobotSlot& slot = robots[static_cast<std::size_t>(robot)];
  return evaluate_kinematics(slot.model, slot.joints.q);
}

World step_simulation(const World& world, const VectorX& qdot, double dt) {
  World next = world;
  Eigen::Index offset = 0;
  for (RobotSlot& slot : next.robots) {
    const Eigen::Index n = slot.model.dof();
    slot.joints.qdot = qdot.segment(offset, n);
    slot.joints.q += slot.joints.qdot * dt;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double clamped = std::clamp(slot.joints.q[j], slot.model.q_min[j], slot.model.q_max[j]);
      if (clamped != slot.joints.q[j]) {
        slot.joints.q[j] = clamped;
        ++next.clamp_events;
      }
    }
    offset += n;
  }
  next.time = world.time + dt;
  return next;
}

VectorX solve_port_configuration(const RobotModel& model, const Vector3& tip, const Vector3& rcm,
                                 const VectorX& guess) {
  const Vector3 direction = (tip - rcm).normalized();
  VectorX q = guess;
  const int n = model.dof();
  for (int iter = 0; iter < 500; ++iter) {
    const KinematicState s = evaluate_kinematics(model, q);
    Eigen::Matrix<double, 6, 1> err;
    err << s.tip() - tip, s.shaft.direction() - direction;
    if (err.norm() < 1e-13) {
      break;
    }
    Eigen::MatrixXd jac(6, n);
    jac << s.translation_jacobian, s.shaft_direction_jacobian();
    const double damping = 1e-6;
    const Eigen::MatrixXd a = jac * jac.transpose() + damping * Eigen::MatrixXd::Identity(6, 6);
    q -= jac.transpose() * a.ldlt().solve(err);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    q[j] = std::remainder(q[j], 2.0 * M_PI);
  }
  const KinematicState s = evaluate_kinematics(model, q);
  const double residual = (s.tip() - tip).norm() + (s.shaft.direction() - direction).norm();
  if (residual > 1e-10) {
    throw std::runtime_error("initial configuration for '" + model.name +
                             "' did not converge (residual " + std::to_string(residual) + ")");
  }
  return q;
}

MasterScript::MasterScript(std::function<ScriptSample(double)> desired, double motion_scaling,
                           const ScriptSample& origin)
    : desired_(std::move(desired)), origin_(origin), ms_(motion_scaling) {}

ScriptSample MasterScript::master(double t) const {
  if (!desired_) {
    return {};
  }
  const ScriptSample d = desired_(t);
  return {(d.first - origin_.first) / ms_, (d.second - origin_.second) / ms_};
}

ScriptSample MasterScript::slave_targets(double t, const ScriptSample& initial_tips) const {
  const ScriptSample m = master(t);
  return {initial_tips.first + ms_ * m.first, initial_tips.second + ms_ * m.second};
}

Vector3 LoopFrame::at(double radius, double phase, double depth) const {
  return center + radius * (std::cos(phase) * radial + std::sin(phase) * binormal) + depth * axis;
}

namespace {

// Uniform double in [0, 1) from the top 53 bits; independent of the standard library's
// distribution implementations.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

BandLimitedNoise::BandLimitedNoise(std::uint64_t seed, double std_dev, int components, double f_min, double f_max) {
  std::mt19937_64 rng(seed);
  const double a = std_dev * std::sqrt(2.0 / components);
  for (int k = 0; k < components; ++k) {
    amplitude_.push_back(a);
    frequency_.push_back(f_min + (f_max - f_min) * uniform01(rng));
    phase_.push_back(2.0 * M_PI * uniform01(rng));
  }
}

double BandLimitedNoise::operator()(double t) const {
  double v = 0.0;
  for (std::size_t k = 0; k < amplitude_.size(); ++k) {
    v += amplitude_[k] * std::sin(2.0 * M_PI * frequency_[k] * t + phase_[k]);
  }
  return v;
}

namespace {

RobotModel load_model(const std::string& path) { return path.empty() ? reference_model() : load_robot_model(path); }

struct Placement {
  UnitDualQuaternion base;
  VectorX guess;
};

// Bases 0.6 m to either side of the workspace and 0.2 m below it, the second facing the first.
Placement placement(int robot, int dof) {
  Placement p;
  const double side = robot == 0 ? -1.0 : 1.0;
  const UnitQuaternion yaw = robot == 0 ? UnitQuaternion() : UnitQuaternion::from_axis_angle(Vector3::UnitZ(), M_PI);
  p.base = UnitDualQuaternion(yaw, PureQuaternion(side * 0.6, 0.0, -0.2));
  p.guess = VectorX::Zero(dof);
  if (dof == 6) {
    p.guess << 0.3, -0.35, 1.85, 0.85, 1.37, 0.0;
  }
  return p;
}

// Lapses: brief drifts of the commanded radius toward the shaft, one per equal time slot.
struct Lapse {
  double center;
  double duration;
};

std::vector<Lapse> make_lapses(std::mt19937_64& rng, const ScenarioConfig& c) {
  std::vector<Lapse> out;
  const int count = static_cast<int>(std::lround(c.script.lapses_per_loop * c.script.loops));
  for (int j = 0; j < count; ++j) {
    const double slot = c.duration / count;
    out.push_back({(j + 0.2 + 0.6 * uniform01(rng)) * slot, c.script.lapse_duration});
  }
  return out;
}

double lapse_weight(const std::vector<Lapse>& lapses, double t) {
  double w = 0.0;
  for (const Lapse& l : lapses) {
    const double x = (t - l.center) / l.duration;
    if (std::abs(x) < 0.5) {
      const double s = std::cos(M_PI * x);
      w = std::max(w, s * s);
    }
  }
  return w;
}

double plane_height(const ScenarioConfig& c, double base, double t) {
  return base + c.script.plane_amplitude * kMillimeter * std::sin(2.0 * M_PI * c.script.plane_frequency * t);
}

double plane_rate(const ScenarioConfig& c, double t) {
  const double w = 2.0 * M_PI * c.script.plane_frequency;
  return c.script.plane_amplitude * kMillimeter * w * std::cos(w * t);
}

}  // namespace

Scene make_scene(const ScenarioConfig& config) {
  validate_scenario(config);
  Scene scene;
  World& w = scene.world;
  w.dt = config.dt();
  const double lateral = config.scene.rcm_lateral * kMillimeter;
  const double height = config.scene.rcm_height * kMillimeter;
  for (int i = 0; i < 2; ++i) {
    RobotSlot& slot = w.robots[static_cast<std::size_t>(i)];
    const std::string& path = i == 0 ? config.scene.robot_first : config.scene.robot_second;
    try {
      slot.model = load_model(path);
      slot.model.validate();
    } catch (const std::exception& e) {
      throw ConfigError(std::string(i == 0 ? "scene.robot_first" : "scene.robot_second") + ": " + e.what());
    }
    slot.rcm_center = Vector3(i == 0 ? -lateral : lateral, 0.0, height);
  }

  LoopFrame& f = scene.frame;
  f.center = Vector3::Zero();
  f.axis = (f.center - w.robots[0].rcm_center).normalized();
  const Vector3 toward = w.robots[1].rcm_center - f.center;
  f.radial = toward - toward.dot(f.axis) * f.axis;
  if (f.radial.norm() < 1e-9) {
    f.radial = reference_radial_direction(f.axis);
  }
  f.radial.normalize();
  f.binormal = f.axis.cross(f.radial);

  const ScriptConfig& s = config.script;
  const double mm = kMillimeter;
  const double r_guide = config.table.r_guide * mm;
  const double duration = config.duration;
  scene.script_kind = config.resolved_script();
  std::mt19937_64 rng(config.seed);
  const BandLimitedNoise noise(rng(), s.noise_amplitude * mm, s.noise_components, s.noise_min_frequency,
                               s.noise_max_frequency);
  const std::vector<Lapse> lapses = make_lapses(rng, config);
  const Vector3 hold_first = f.center;
  const Vector3 hold_second = f.at(r_guide, 0.0, (s.depth_mid - s.depth_amplitude) * mm);

  std::function<ScriptSample(double)> desired;
  switch (scene.script_kind) {
    case ScriptKind::automatic:
    case ScriptKind::hold:
      desired = [=](double) { return ScriptSample{hold_first, hold_second}; };
      break;
    case ScriptKind::loop:
      desired = [=](double t) {
        const double phase = 2.0 * M_PI * s.loops * t / duration;
        const double depth = (s.depth_mid - s.depth_amplitude * std::cos(phase)) * mm;
        const double b = lapse_weight(lapses, t);
        const Vector3 nominal = f.at(r_guide + noise(t), phase, depth);
        const Vector3 drift = f.at(s.lapse_radius * mm, phase, s.lapse_depth * mm);
        return ScriptSample{hold_first, (1.0 - b) * nominal + b * drift};
      };
      break;
    case ScriptKind::adversarial:
      desired = [=](double t) {
        const double x = 0.5 * s.adversarial_span * mm * (1.0 - 2.0 * t / duration);
        return ScriptSample{hold_first, f.at(x, 0.0, s.adversarial_depth * mm)};
      };
      break;
    case ScriptKind::circle:
      desired = [=](double t) {
        const double rho = s.circle_radius * mm;
        const double phase = 2.0 * M_PI * t / s.circle_period;
        const double base = hold_first.z() + s.plane_initial_offset * mm;
        const Vector3 p = hold_first + Vector3(rho * (std::cos(phase) - 1.0), rho * std::sin(phase), 0.0);
        return ScriptSample{Vector3(p.x(), p.y(), plane_height(config, base, t) + 5.0 * mm), hold_second};
      };
      break;
  }
  // Initial tips: the first at the workspace center, the second where its script starts. The
  // plane script starts below its target by design, so the first tip is placed at the center.
  const ScriptSample start = desired(0.0);
  scene.script = MasterScript(desired, config.table.ms, {hold_first, start.second});
  const std::array<Vector3, 2> tips{hold_first, start.second};
  for (int i = 0; i < 2; ++i) {
    RobotSlot& slot = w.robots[static_cast<std::size_t>(i)];
    const Placement p = placement(i, slot.model.dof());
    if (config.scene.robot_first.empty() && i == 0) {
      slot.model.base = p.base;
    }
    if (config.scene.robot_second.empty() && i == 1) {
      slot.model.base = p.base;
    }
    slot.joints = JointState(solve_port_configuration(slot.model, tips[static_cast<std::size_t>(i)],
                                                      slot.rcm_center, p.guess));
    for (Eigen::Index j = 0; j < slot.joints.q.size(); ++j) {
      if (slot.joints.q[j] <= slot.model.q_min[j] || slot.joints.q[j] >= slot.model.q_max[j]) {
        throw std::runtime_error("initial configuration of '" + slot.model.name + "' violates joint limit " +
                                 std::to_string(j));
      }
    }
  }
  return scene;
}

CollisionCheck detect_collision(const KinematicState& a, const KinematicState& b, double r_min, ShaftModel model,
                                double shaft_length) {
  const ShaftDistance d = shaft_distance_jacobians(a, b, model, shaft_length);
  const double distance = std::sqrt(std::max(0.0, d.value));
  return {distance < r_min - kCollisionTolerance, distance};
}

CollisionCheck detect_collision(const World& world, double r_min, ShaftModel model, double shaft_length) {
  return detect_collision(world.state(0), world.state(1), r_min, model, shaft_length);
}

TrajectoryLog::TrajectoryLog(std::vector<std::string> header) : header_(std::move(header)) {}

void TrajectoryLog::append(std::vector<double> row) {
  if (row.size() != header_.size()) {
    throw std::logic_error("TrajectoryLog: row has " + std::to_string(row.size()) + " columns, header has " +
                           std::to_string(header_.size()));
  }
  rows_.push_back(std::move(row));
}

std::size_t TrajectoryLog::column(const std::string& name) const {
  const auto it = std::find(header_.begin(), header_.end(), name);
  if (it == header_.end()) {
    throw std::out_of_range("TrajectoryLog: no column '" + name + "'");
  }
  return static_cast<std::size_t>(it - header_.begin());
}

std::string TrajectoryLog::to_csv() const {
  std::string out;
  for (std::size_t k = 0; k < header_.size(); ++k) {
    out += (k ? "," : "") + header_[k];
  }
  out += '\n';
  char buf[40];
  for (const auto& row : rows_) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", row[k]);
      if (k) {
        out += ',';
      }
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void TrajectoryLog::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << to_csv();
}

std::string Metrics::to_json() const {
  nlohmann::ordered_json j;
  j["mode"] = mode;
  j["seed"] = seed;
  j["steps"] = steps;
  j["completion_time_s"] = completion_time;
  j["mean_error_mm"] = mean_error_mm;
  j["median_error_mm"] = median_error_mm;
  j["max_error_mm"] = max_error_mm;
  j["collision_count"] = collision_count;
  j["min_shaft_distance_mm"] = min_shaft_distance_mm;
  j["max_rcm_excess_m2"] = max_rcm_excess;
  j["max_cylinder_excess_m2"] = max_cylinder_excess;
  j["max_band_excess_mm"] = max_band_excess_mm;
  j["max_constraint_violation"] = max_constraint_violation;
  j["max_kkt_residual"] = max_kkt_residual;
  j["infeasible_steps"] = infeasible_steps;
  j["clamp_events"] = clamp_events;
  j["max_plane_deviation_mm"] = max_plane_deviation_mm;
  return j.dump(2) + "\n";
}

namespace {

constexpr RowTag kLoggedTags[] = {RowTag::joint_limit,   RowTag::rcm,           RowTag::shaft_shaft,
                                  RowTag::lvf_cylinder,  RowTag::lvf_plane_min, RowTag::lvf_plane_max,
                                  RowTag::plane};

std::vector<std::string> log_header(int n1, int n2) {
  std::vector<std::string> h{"t"};
  for (int j = 0; j < n1; ++j) {
    h.push_back("q1_" + std::to_string(j));
  }
  for (int j = 0; j < n2; ++j) {
    h.push_back("q2_" + std::to_string(j));
  }
  for (const char* prefix : {"t1_", "t2_", "target1_", "target2_"}) {
    for (const char* axis : {"x", "y", "z"}) {
      h.push_back(std::string(prefix) + axis);
    }
  }
  for (const char* name : {"d_rcm1", "d_rcm2", "shaft_distance", "d_guide", "guidance_error", "band_distance",
                           "plane_height", "plane_distance"}) {
    h.emplace_back(name);
  }
  for (RowTag tag : kLoggedTags) {
    h.push_back("margin_" + std::string(to_string(tag)));
  }
  for (const char* prefix : {"force1_", "force2_", "force_guide_"}) {
    for (const char* axis : {"x", "y", "z"}) {
      h.push_back(std::string(prefix) + axis);
    }
  }
  for (const char* name : {"infeasible", "qp_iterations", "kkt_residual"}) {
    h.emplace_back(name);
  }
  return h;
}

void push(std::vector<double>& row, const Vector3& v) { row.insert(row.end(), {v.x(), v.y(), v.z()}); }

// Initial orientation turned by the smallest rotation that points the shaft from the entry
// point at the commanded tip.
UnitQuaternion port_rotation(const UnitQuaternion& initial, const Vector3& initial_shaft, const Vector3& rcm,
                             const Vector3& target) {
  const Vector3 to = target - rcm;
  if (to.norm() < 1e-9) {
    return initial;
  }
  const Vector3 b = to.normalized();
  const Vector3 axis = initial_shaft.cross(b);
  const double w = 1.0 + initial_shaft.dot(b);
  if (w < 1e-9) {
    return initial;
  }
  const Quaternion turn = Quaternion{w, axis.x(), axis.y(), axis.z()} * (1.0 / std::hypot(w, axis.norm()));
  return UnitQuaternion(turn * initial.quaternion());
}

double median(std::vector<double> v) {
  if (v.empty()) {
    return 0.0;
  }
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) {
    return upper;
  }
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config) {
  Scene scene = make_scene(config);
  World world = scene.world;
  const ControllerParams cparams = controller_params(config);
  const FixtureParams fixtures = fixture_params(config);
  const ImpedanceParams impedance = impedance_params(config);
  cparams.validate();
  fixtures.validate();
  impedance.validate();

  const int n1 = world.robots[0].model.dof();
  const int n2 = world.robots[1].model.dof();
  const StackLayout layout{n1, n2};
  const double dt = config.dt();
  const int steps = static_cast<int>(std::llround(config.duration * config.steps_per_second));
  const bool plane = is_plane_mode(config.mode);
  const double settle = config.script.settle_time;

  const KinematicState s1_0 = world.state(0);
  const KinematicState s2_0 = world.state(1);
  const ScriptSample initial_tips{s1_0.tip(), s2_0.tip()};
  const std::array<UnitQuaternion, 2> hold_rotation{s1_0.pose.rotation(), s2_0.pose.rotation()};
  const std::array<Vector3, 2> shaft0{s1_0.shaft.direction(), s2_0.shaft.direction()};
  const double plane_base = s1_0.tip().z() + config.script.plane_initial_offset * kMillimeter;

  ScenarioResult result{TrajectoryLog(log_header(n1, n2)), Metrics{}};
  Metrics& m = result.metrics;
  m.mode = std::string(to_string(config.mode));
  m.seed = config.seed;
  m.max_rcm_excess = -std::numeric_limits<double>::infinity();
  m.max_cylinder_excess = -std::numeric_limits<double>::infinity();
  m.min_shaft_distance_mm = std::numeric_limits<double>::infinity();
  std::vector<double> errors;
  errors.reserve(static_cast<std::size_t>(steps) + 1);

  const double d_safe_rcm = fixtures.d_safe_rcm * fixtures.d_safe_rcm;
  const double r_max_sq = fixtures.lvf.r_max * fixtures.lvf.r_max;
  Vector3 last_radial = Vector3::Zero();
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (int k = 0; k <= steps; ++k) {
    const double t = k * dt;
    world.time = t;
    RobotContext c1{&world.robots[0].model, world.state(0), world.robots[0].rcm_center, {}};
    RobotContext c2{&world.robots[1].model, world.state(1), world.robots[1].rcm_center, {}};
    const ScriptSample targets = scene.script.slave_targets(t, initial_tips);
    // Orientation that keeps the shaft through the entry point at the current tip.
    c1.target = {targets.first, port_rotation(hold_rotation[0], shaft0[0], c1.rcm_center, c1.state.tip())};
    c2.target = {targets.second, port_rotation(hold_rotation[1], shaft0[1], c2.rcm_center, c2.state.tip())};

    ConstraintSet extra;
    double plane_h = nan;
    double plane_distance = nan;
    if (plane) {
      ZoneSpec zone;
      zone.kind = ZoneKind::safe;
      zone.gain = fixtures.eta_d;
      zone.safe_distance = [&](double time) { return plane_height(config, plane_base, time); };
      zone.safe_distance_rate = [&](double time) { return plane_rate(config, time); };
      zone.feed_forward = config.mode == ScenarioMode::plane_vfi;
      const RowJacobian jd = Vector3::UnitZ().transpose() * c1.state.translation_jacobian;
      extra.add(vfi_row(stack_row(layout, 0, jd), c1.state.tip().z(), zone, t, RowTag::plane));
      plane_h = plane_height(config, plane_base, t);
      plane_distance = c1.state.tip().z() - plane_h;
    }

    const ControlOutput out = control_step(c1, c2, cparams, fixtures, extra);

    // Monitors.
    const KinematicState& s1 = c1.state;
    const KinematicState& s2 = c2.state;
    const double d_rcm1 = point_line_sq_distance(s1.shaft, c1.rcm_center);
    const double d_rcm2 = point_line_sq_distance(s2.shaft, c2.rcm_center);
    const CollisionCheck col = detect_collision(s1, s2, fixtures.lvf.r_min, fixtures.lvf.shaft_model,
                                                fixtures.lvf.shaft_length);
    const double d_guide = point_line_sq_distance(s1.shaft, s2.tip());
    const double error = std::abs(std::sqrt(d_guide) - fixtures.r_guide);
    const double band = (s2.tip() - s1.tip()).dot(s1.shaft.direction());
    const double band_excess = std::max({0.0, fixtures.lvf.d_pi_min - band, band - fixtures.lvf.d_pi_max});

    errors.push_back(error / kMillimeter);
    m.collision_count += col.collision ? 1 : 0;
    m.min_shaft_distance_mm = std::min(m.min_shaft_distance_mm, col.distance / kMillimeter);
    m.max_rcm_excess = std::max({m.max_rcm_excess, d_rcm1 - d_safe_rcm, d_rcm2 - d_safe_rcm});
    m.max_cylinder_excess = std::max(m.max_cylinder_excess, d_guide - r_max_sq);
    m.max_band_excess_mm = std::max(m.max_band_excess_mm, band_excess / kMillimeter);
    if (out.margins.size() > 0) {
      m.max_constraint_violation = std::max(m.max_constraint_violation, -out.margins.minCoeff());
    }
    m.max_kkt_residual = std::max(m.max_kkt_residual, out.kkt.max());
    m.infeasible_steps += out.infeasible ? 1 : 0;
    if (plane && t >= settle) {
      m.max_plane_deviation_mm = std::max(m.max_plane_deviation_mm, std::abs(plane_distance) / kMillimeter);
    }

    // Master forces.
    const ScriptSample v_master = [&] {
      const double h = 0.5 * dt;
      const ScriptSample a = scene.script.master(t + h);
      const ScriptSample b = scene.script.master(std::max(0.0, t - h));
      const double span = t - h < 0.0 ? t + h : 2.0 * h;
      return ScriptSample{(a.first - b.first) / span, (a.second - b.second) / span};
    }();
    const Cylinder guide(s1.shaft, fixtures.r_guide);
    const GuidanceError g = guidance_translation_error(guide, s2.tip(), last_radial);
    {
      const Vector3 radial = s2.tip() - s1.shaft.point() -
                             (s2.tip() - s1.shaft.point()).dot(s1.shaft.direction()) * s1.shaft.direction();
      if (radial.norm() > kAxisDegeneracyTolerance) {
        last_radial = radial.normalized();
      }
    }
    MasterState ms;
    ms.velocity_first = v_master.first;
    ms.velocity_second = v_master.second;
    ms.tracking_error_first = s1.tip() - c1.target.translation;
    ms.tracking_error_second = s2.tip() - c2.target.translation;
    ms.guidance_error = g.error;
    const MasterForces forces = master_forces(to_master_frame(ms, impedance), impedance);

    std::vector<double> row;
    row.reserve(result.log.header().size());
    row.push_back(t);
    for (int j = 0; j < n1; ++j) {
      row.push_back(s1.q[j]);
    }
    for (int j = 0; j < n2; ++j) {
      row.push_back(s2.q[j]);
    }
    push(row, s1.tip());
    push(row, s2.tip());
    push(row, c1.target.translation);
    push(row, c2.target.translation);
    row.insert(row.end(), {d_rcm1, d_rcm2, col.distance, d_guide, error, band, plane_h, plane_distance});
    for (RowTag tag : kLoggedTags) {
      double margin = nan;
      for (std::size_t r = 0; r < out.rows.size(); ++r) {
        if (out.rows.rows()[r].tag == tag) {
          const double v = out.margins[static_cast<Eigen::Index>(r)];
          margin = std::isnan(margin) ? v : std::min(margin, v);
        }
      }
      row.push_back(margin);
    }
    push(row, forces.first.total());
    push(row, forces.second.total());
    push(row, forces.first.guidance);
    row.insert(row.end(), {out.infeasible ? 1.0 : 0.0, static_cast<double>(out.iterations), out.kkt.max()});
    result.log.append(std::move(row));

    if (k < steps) {
      world = step_simulation(world, out.qdot, dt);
    }
  }

  m.steps = steps;
  m.completion_time = steps * dt;
  m.clamp_events = world.clamp_events;
  double sum = 0.0;
  for (double e : errors) {
    sum += e;
    m.max_error_mm = std::max(m.max_error_mm, e);
  }
  m.mean_error_mm = sum / static_cast<double>(errors.size());
  m.median_error_mm = median(errors);
  return result;
}

Metrics looping_benchmark(const ScenarioConfig& config, ScenarioMode mode) {
  ScenarioConfig c = config;
  c.mode = mode;
  return run_scenario(c).metrics;
}

double PlaneBenchmarkReport::ratio() const {
  return static_bound.max_plane_deviation_mm > 0.0 ? vfi.max_plane_deviation_mm / static_bound.max_plane_deviation_mm
                                                   : 0.0;
}

std::string PlaneBenchmarkReport::to_json() const {
  nlohmann::ordered_json j;
  j["plane_speed_mm_s"] = plane_speed / kMillimeter;
  j["static_max_deviation_mm"] = static_bound.max_plane_deviation_mm;
  j["vfi_max_deviation_mm"] = vfi.max_plane_deviation_mm;
  j["deviation_ratio"] = ratio();
  j["static"] = nlohmann::ordered_json::parse(static_bound.to_json());
  j["vfi"] = nlohmann::ordered_json::parse(vfi.to_json());
  return j.dump(2) + "\n";
}

PlaneBenchmarkReport dynamic_plane_benchmark(const ScenarioConfig& config) {
  ScenarioConfig c = config;
  c.mode = ScenarioMode::plane_static_constraint;
  const ScenarioResult stat = run_scenario(c);
  c.mode = ScenarioMode::plane_vfi;
  const ScenarioResult vfi = run_scenario(c);

  PlaneBenchmarkReport report;
  report.static_bound = stat.metrics;
  report.vfi = vfi.metrics;
  report.plane_speed = 2.0 * M_PI * config.script.plane_frequency * config.script.plane_amplitude * kMillimeter;
  report.trace = TrajectoryLog({"t", "plane_height", "static_distance", "vfi_distance"});
  const std::size_t ct = stat.log.column("t");
  const std::size_t ch = stat.log.column("plane_height");
  const std::size_t cd = stat.log.column("plane_distance");
  for (std::size_t k = 0; k < stat.log.rows().size(); ++k) {
    report.trace.append({stat.log.rows()[k][ct], stat.log.rows()[k][ch], stat.log.rows()[k][cd],
                         vfi.log.rows()[k][cd]});
  }
  return report;
}

}  // namespace vfix
