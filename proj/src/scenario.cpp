#include "vfix/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace vfix {

std::string_view to_string(ScenarioMode m) {
  switch (m) {
    case ScenarioMode::A1_entry_only:
      return "A1_entry_only";
    case ScenarioMode::A2_shaft_shaft:
      return "A2_shaft_shaft";
    case ScenarioMode::A3_lvf_tgc:
      return "A3_lvf_tgc";
    case ScenarioMode::plane_static_constraint:
      return "plane_static_constraint";
    case ScenarioMode::plane_vfi:
      return "plane_vfi";
  }
  return "unknown";
}

ScenarioMode scenario_mode_from_string(std::string_view s) {
  for (ScenarioMode m : {ScenarioMode::A1_entry_only, ScenarioMode::A2_shaft_shaft, ScenarioMode::A3_lvf_tgc,
                         ScenarioMode::plane_static_constraint, ScenarioMode::plane_vfi}) {
    if (s == to_string(m)) {
      return m;
    }
  }
  throw std::invalid_argument("unknown mode '" + std::string(s) +
                              "' (expected A1_entry_only, A2_shaft_shaft, A3_lvf_tgc, plane_static_constraint or "
                              "plane_vfi)");
}

bool is_plane_mode(ScenarioMode m) {
  return m == ScenarioMode::plane_static_constraint || m == ScenarioMode::plane_vfi;
}

std::string_view to_string(ScriptKind k) {
  switch (k) {
    case ScriptKind::automatic:
      return "auto";
    case ScriptKind::hold:
      return "hold";
    case ScriptKind::loop:
      return "loop";
    case ScriptKind::adversarial:
      return "adversarial";
    case ScriptKind::circle:
      return "circle";
  }
  return "unknown";
}

ScriptKind script_kind_from_string(std::string_view s) {
  for (ScriptKind k :
       {ScriptKind::automatic, ScriptKind::hold, ScriptKind::loop, ScriptKind::adversarial, ScriptKind::circle}) {
    if (s == to_string(k)) {
      return k;
    }
  }
  throw std::invalid_argument("unknown script kind '" + std::string(s) +
                              "' (expected auto, hold, loop, adversarial or circle)");
}

ScriptKind ScenarioConfig::resolved_script() const {
  if (script.kind != ScriptKind::automatic) {
    return script.kind;
  }
  return is_plane_mode(mode) ? ScriptKind::circle : ScriptKind::loop;
}

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Reads fields out of one JSON object and rejects keys nobody asked for.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) {
      throw ConfigError((path_.empty() ? std::string("config") : path_) + ": expected an object");
    }
  }

  void operator()(const char* key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) {
        throw ConfigError(join(path_, key) + ": expected a number");
      }
      out = v->get<double>();
      if (!std::isfinite(out)) {
        throw ConfigError(join(path_, key) + ": must be finite");
      }
    }
  }
  void operator()(const char* key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) {
        throw ConfigError(join(path_, key) + ": expected an integer");
      }
      out = v->get<int>();
    }
  }
  void operator()(const char* key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
        throw ConfigError(join(path_, key) + ": expected a non-negative integer");
      }
      out = v->get<std::uint64_t>();
    }
  }
  void operator()(const char* key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) {
        throw ConfigError(join(path_, key) + ": expected a string");
      }
      out = v->get<std::string>();
    }
  }
  template <typename Enum, typename Parse>
  void enumeration(const char* key, Enum& out, Parse parse) {
    std::string text;
    (*this)(key, text);
    if (find(key) != nullptr) {
      try {
        out = parse(text);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(join(path_, key) + ": " + e.what());
      }
    }
  }
  template <typename Fn>
  void object(const char* key, Fn fn) {
    if (const json* v = find(key)) {
      Reader sub(*v, join(path_, key));
      fn(sub);
      sub.finish();
    }
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (seen_.count(item.key()) == 0) {
        throw ConfigError(join(path_, item.key()) + ": unknown key");
      }
    }
  }

 private:
  const json* find(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

class Writer {
 public:
  explicit Writer(ordered_json& j) : j_(j) {}

  template <typename T>
  void operator()(const char* key, const T& value) {
    j_[key] = value;
  }
  template <typename Enum, typename Parse>
  void enumeration(const char* key, const Enum& value, Parse) {
    j_[key] = std::string(to_string(value));
  }
  template <typename Fn>
  void object(const char* key, Fn fn) {
    ordered_json sub = ordered_json::object();
    Writer w(sub);
    fn(w);
    j_[key] = sub;
  }

 private:
  ordered_json& j_;
};

template <typename V, typename T>
void visit_table(V& v, T& t) {
  v("alpha", t.alpha);
  v("beta", t.beta);
  v("gamma", t.gamma);
  v("eta", t.eta);
  v("eta_d", t.eta_d);
  v("eta_rcm", t.eta_rcm);
  v("eta_guide", t.eta_guide);
  v("lambda", t.lambda);
  v("eta_f", t.eta_f);
  v("eta_v", t.eta_v);
  v("ms", t.ms);
  v("r_min", t.r_min);
  v("r_max", t.r_max);
  v("r_guide", t.r_guide);
  v("d_safe_rcm", t.d_safe_rcm);
  v("d_pi_min", t.d_pi_min);
  v("d_pi_max", t.d_pi_max);
}

template <typename V, typename S>
void visit_script(V& v, S& s) {
  v.enumeration("kind", s.kind, script_kind_from_string);
  v("loops", s.loops);
  v("depth_mid", s.depth_mid);
  v("depth_amplitude", s.depth_amplitude);
  v("noise_amplitude", s.noise_amplitude);
  v("noise_components", s.noise_components);
  v("noise_min_frequency", s.noise_min_frequency);
  v("noise_max_frequency", s.noise_max_frequency);
  v("lapses_per_loop", s.lapses_per_loop);
  v("lapse_radius", s.lapse_radius);
  v("lapse_depth", s.lapse_depth);
  v("lapse_duration", s.lapse_duration);
  v("adversarial_depth", s.adversarial_depth);
  v("adversarial_span", s.adversarial_span);
  v("circle_radius", s.circle_radius);
  v("circle_period", s.circle_period);
  v("plane_amplitude", s.plane_amplitude);
  v("plane_frequency", s.plane_frequency);
  v("plane_initial_offset", s.plane_initial_offset);
  v("settle_time", s.settle_time);
}

template <typename V, typename S>
void visit_scene(V& v, S& s) {
  v("rcm_lateral", s.rcm_lateral);
  v("rcm_height", s.rcm_height);
  v("robot_first", s.robot_first);
  v("robot_second", s.robot_second);
}

// Table parameters live at the top level so that files read like the parameter table.
template <typename V, typename C>
void visit_config(V& v, C& c) {
  v("schema", c.schema);
  v.enumeration("mode", c.mode, scenario_mode_from_string);
  visit_table(v, c.table);
  v("eta_jl", c.eta_jl);
  v.enumeration("shaft_model", c.shaft_model, shaft_model_from_string);
  v("shaft_length", c.shaft_length);
  v("steps_per_second", c.steps_per_second);
  v("duration", c.duration);
  v("seed", c.seed);
  v.object("script", [&](auto& sub) { visit_script(sub, c.script); });
  v.object("scene", [&](auto& sub) { visit_scene(sub, c.scene); });
}

void apply_override(json& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "': expected key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &root;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) {
      throw ConfigError("override '" + assignment + "': empty path component");
    }
    if (!node->is_object()) {
      throw ConfigError(key.substr(0, start == 0 ? 0 : start - 1) + ": cannot override inside a non-object");
    }
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    if (!node->contains(part)) {
      (*node)[part] = json::object();
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

void check(bool ok, const std::string& message) {
  if (!ok) {
    throw ConfigError(message);
  }
}

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

}  // namespace

void validate_scenario(const ScenarioConfig& c) {
  const TableParams& t = c.table;
  check(c.schema == kConfigSchema, "schema: unsupported version " + std::to_string(c.schema) + " (expected " +
                                       std::to_string(kConfigSchema) + ")");
  for (const auto& [name, v] : {std::pair{"alpha", t.alpha}, {"beta", t.beta}, {"gamma", t.gamma}}) {
    check(v >= 0.0 && v <= 1.0, std::string(name) + ": must lie in [0, 1], got " + fmt(v));
  }
  for (const auto& [name, v] : {std::pair{"eta", t.eta}, {"eta_d", t.eta_d}, {"eta_rcm", t.eta_rcm},
                                {"eta_guide", t.eta_guide}, {"eta_v", t.eta_v}, {"eta_jl", c.eta_jl}}) {
    check(v >= 0.0, std::string(name) + ": must be non-negative, got " + fmt(v));
  }
  for (const auto& [name, v] :
       {std::pair{"lambda", t.lambda}, {"eta_f", t.eta_f}, {"ms", t.ms}, {"r_min", t.r_min}, {"r_max", t.r_max},
        {"r_guide", t.r_guide}, {"d_safe_rcm", t.d_safe_rcm}, {"shaft_length", c.shaft_length},
        {"steps_per_second", c.steps_per_second}, {"duration", c.duration}}) {
    check(v > 0.0, std::string(name) + ": must be positive, got " + fmt(v));
  }
  check(t.d_pi_min < t.d_pi_max,
        "d_pi_min (" + fmt(t.d_pi_min) + " mm) must be smaller than d_pi_max (" + fmt(t.d_pi_max) + " mm)");
  check(t.r_min < t.r_max, "r_min (" + fmt(t.r_min) + " mm) must be smaller than r_max (" + fmt(t.r_max) + " mm)");
  check(t.r_guide <= t.r_max,
        "r_guide (" + fmt(t.r_guide) + " mm) must not exceed r_max (" + fmt(t.r_max) + " mm)");

  const ScriptConfig& s = c.script;
  check(s.loops > 0.0, "script.loops: must be positive");
  check(s.noise_amplitude >= 0.0, "script.noise_amplitude: must be non-negative");
  check(s.noise_components >= 1, "script.noise_components: must be at least 1");
  check(s.noise_min_frequency > 0.0 && s.noise_min_frequency <= s.noise_max_frequency,
        "script.noise_min_frequency: must be positive and not above script.noise_max_frequency");
  check(s.lapses_per_loop >= 0, "script.lapses_per_loop: must be non-negative");
  check(s.lapse_radius >= 0.0, "script.lapse_radius: must be non-negative");
  check(s.lapse_duration > 0.0, "script.lapse_duration: must be positive");
  check(s.adversarial_span > 0.0, "script.adversarial_span: must be positive");
  check(s.circle_period > 0.0, "script.circle_period: must be positive");
  check(s.circle_radius >= 0.0, "script.circle_radius: must be non-negative");
  check(s.plane_amplitude >= 0.0, "script.plane_amplitude: must be non-negative");
  check(s.plane_frequency >= 0.0, "script.plane_frequency: must be non-negative");
  check(s.settle_time >= 0.0 && s.settle_time < c.duration,
        "script.settle_time: must be non-negative and shorter than duration");
  check(c.scene.rcm_lateral > 0.0, "scene.rcm_lateral: must be positive");
}

ScenarioConfig parse_scenario_text(const std::string& text, const std::vector<std::string>& overrides) {
  json root;
  const bool blank = text.find_first_not_of(" \t\r\n") == std::string::npos;
  if (blank) {
    root = json::object();
  } else {
    try {
      root = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
  }
  if (!root.is_object()) {
    throw ConfigError("config: expected an object");
  }
  for (const auto& o : overrides) {
    apply_override(root, o);
  }
  ScenarioConfig c;
  Reader reader(root, "");
  visit_config(reader, c);
  reader.finish();
  validate_scenario(c);
  return c;
}

ScenarioConfig parse_scenario(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str(), overrides);
}

std::string dump_scenario(const ScenarioConfig& config) {
  ordered_json j = ordered_json::object();
  Writer writer(j);
  ScenarioConfig copy = config;
  visit_config(writer, copy);
  return j.dump(2) + "\n";
}

ControllerParams controller_params(const ScenarioConfig& c) {
  ControllerParams p;
  p.alpha = c.table.alpha;
  p.beta = c.table.beta;
  p.gamma = c.table.gamma;
  p.eta = c.table.eta;
  p.eta_guide = c.table.eta_guide;
  p.lambda = c.table.lambda;
  p.mode = c.mode == ScenarioMode::A3_lvf_tgc ? ControllerMode::proposed : ControllerMode::baseline;
  return p;
}

FixtureParams fixture_params(const ScenarioConfig& c) {
  FixtureParams f;
  f.eta_d = c.table.eta_d;
  f.eta_rcm = c.table.eta_rcm;
  f.eta_jl = c.eta_jl;
  f.d_safe_rcm = c.table.d_safe_rcm * kMillimeter;
  f.r_guide = c.table.r_guide * kMillimeter;
  f.lvf.r_min = c.table.r_min * kMillimeter;
  f.lvf.r_max = c.table.r_max * kMillimeter;
  f.lvf.d_pi_min = c.table.d_pi_min * kMillimeter;
  f.lvf.d_pi_max = c.table.d_pi_max * kMillimeter;
  f.lvf.shaft_model = c.shaft_model;
  f.lvf.shaft_length = c.shaft_length * kMillimeter;
  f.rcm = true;
  f.shaft_shaft = c.mode == ScenarioMode::A2_shaft_shaft;
  f.lvf_rows = c.mode == ScenarioMode::A3_lvf_tgc;
  return f;
}

ImpedanceParams impedance_params(const ScenarioConfig& c) {
  ImpedanceParams p;
  p.eta_f = c.table.eta_f;
  p.eta_v = c.table.eta_v;
  p.gamma = c.table.gamma;
  return p;
}

}  // namespace vfix
