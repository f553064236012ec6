#include "vfix/cli.hpp"

#include "vfix/audit.hpp"
#include "vfix/simulation.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

namespace vfix {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config;
  std::string out_dir{"."};
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<double> steps_per_second;
  int samples{200};
};

ScenarioConfig load(const Options& o) {
  std::vector<std::string> overrides = o.overrides;
  if (o.seed) {
    overrides.push_back("seed=" + std::to_string(*o.seed));
  }
  if (o.steps_per_second) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "steps_per_second=%.17g", *o.steps_per_second);
    overrides.emplace_back(buf);
  }
  return parse_scenario(o.config, overrides);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot write " + path.string());
  }
  f << text;
}

fs::path prepare_out(const Options& o) {
  const fs::path dir(o.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  }
  return dir;
}

int cmd_run(const Options& o, std::ostream& out) {
  const ScenarioConfig c = load(o);
  const fs::path dir = prepare_out(o);
  const ScenarioResult r = run_scenario(c);
  r.log.write(dir / "trajectory.csv");
  write_text(dir / "metrics.json", r.metrics.to_json());
  write_text(dir / "effective_config.json", dump_scenario(c));
  out << r.metrics.to_json();
  return kExitOk;
}

int cmd_plane(const Options& o, std::ostream& out) {
  const ScenarioConfig c = load(o);
  const fs::path dir = prepare_out(o);
  const PlaneBenchmarkReport r = dynamic_plane_benchmark(c);
  r.trace.write(dir / "plane_trace.csv");
  write_text(dir / "plane_report.json", r.to_json());
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "plane speed %.3f mm/s\nstatic bound max deviation %.6f mm\nvfi max deviation %.6f mm\nratio %.6f\n",
                r.plane_speed * 1e3, r.static_bound.max_plane_deviation_mm, r.vfi.max_plane_deviation_mm, r.ratio());
  out << buf;
  return kExitOk;
}

int cmd_loop(const Options& o, std::ostream& out) {
  const ScenarioConfig c = load(o);
  const fs::path dir = prepare_out(o);
  std::string csv = "mode,seed,mean_error_mm,median_error_mm,max_error_mm,collision_count,min_shaft_distance_mm,"
                    "infeasible_steps\n";
  std::string json = "[\n";
  out << "mode             mean_mm   median_mm max_mm    collisions\n";
  bool first = true;
  for (ScenarioMode mode : {ScenarioMode::A1_entry_only, ScenarioMode::A2_shaft_shaft, ScenarioMode::A3_lvf_tgc}) {
    const Metrics m = looping_benchmark(c, mode);
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%llu,%.17g,%.17g,%.17g,%d,%.17g,%d\n", m.mode.c_str(),
                  static_cast<unsigned long long>(m.seed), m.mean_error_mm, m.median_error_mm, m.max_error_mm,
                  m.collision_count, m.min_shaft_distance_mm, m.infeasible_steps);
    csv += buf;
    std::snprintf(buf, sizeof buf, "%-16s %-9.4f %-9.4f %-9.4f %d\n", m.mode.c_str(), m.mean_error_mm,
                  m.median_error_mm, m.max_error_mm, m.collision_count);
    out << buf;
    json += (first ? "" : ",\n") + m.to_json();
    first = false;
  }
  json += "]\n";
  write_text(dir / "loop_metrics.csv", csv);
  write_text(dir / "loop_metrics.json", json);
  return kExitOk;
}

int cmd_jacobians(const Options& o, std::ostream& out) {
  const JacobianAudit audit = audit_jacobians(o.samples, o.seed.value_or(1));
  out << audit.to_text();
  if (o.out_dir != ".") {
    write_text(prepare_out(o) / "jacobian_audit.json", audit.to_json());
  }
  return audit.passed() ? kExitOk : kExitRuntime;
}

int cmd_default(const Options& o, std::ostream& out) {
  ScenarioConfig c;
  if (!o.overrides.empty()) {
    c = parse_scenario_text("{}", o.overrides);
  }
  out << dump_scenario(c);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-arm virtual fixture simulator", "vfix"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", o.config, "Scenario JSON file")->check(CLI::ExistingFile);
    if (config_required) {
      opt->required();
    }
    sub->add_option("--out", o.out_dir, "Output directory");
    sub->add_option("--set", o.overrides, "Override key=value (dotted paths), repeatable");
    sub->add_option("--seed", o.seed, "Noise seed");
    sub->add_option("--steps-per-second", o.steps_per_second, "Control rate (Hz)");
  };

  CLI::App* run = app.add_subcommand("run", "Run one scenario and write trajectory and metrics");
  add_common(run, true);
  CLI::App* plane = app.add_subcommand("plane-bench", "Moving-plane comparison of static and VFI bounds");
  add_common(plane, true);
  CLI::App* loop = app.add_subcommand("loop-bench", "Double-loop task in the A1, A2 and A3 conditions");
  add_common(loop, true);
  CLI::App* jac = app.add_subcommand("check-jacobians", "Finite-difference audit of all Jacobians");
  jac->add_option("--samples", o.samples, "Random configurations")->check(CLI::PositiveNumber);
  jac->add_option("--seed", o.seed, "Random seed");
  jac->add_option("--out", o.out_dir, "Output directory");
  CLI::App* def = app.add_subcommand("default-config", "Print the default configuration");
  def->add_option("--set", o.overrides, "Override key=value (dotted paths), repeatable");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (run->parsed()) {
      return cmd_run(o, out);
    }
    if (plane->parsed()) {
      return cmd_plane(o, out);
    }
    if (loop->parsed()) {
      return cmd_loop(o, out);
    }
    if (jac->parsed()) {
      return cmd_jacobians(o, out);
    }
    return cmd_default(o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace vfix
