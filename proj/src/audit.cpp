#include "vfix/audit.hpp"

#include "vfix/vfi.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

namespace vfix {

bool JacobianAudit::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) {
      return false;
    }
  }
  return !checks.empty();
}

std::string JacobianAudit::to_text() const {
  std::string out;
  char buf[160];
  for (const auto& c : checks) {
    std::snprintf(buf, sizeof buf, "%-22s samples=%d max_rel_error=%.3e %s\n", c.name.c_str(), c.samples,
                  c.max_relative_error, c.passed ? "PASS" : "FAIL");
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "tolerance=%.1e seed=%llu result=%s\n", tolerance,
                static_cast<unsigned long long>(seed), passed() ? "PASS" : "FAIL");
  out += buf;
  return out;
}

std::string JacobianAudit::to_json() const {
  nlohmann::ordered_json j;
  j["tolerance"] = tolerance;
  j["seed"] = seed;
  j["passed"] = passed();
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    j["checks"].push_back(
        {{"name", c.name}, {"samples", c.samples}, {"max_relative_error", c.max_relative_error}, {"passed", c.passed}});
  }
  return j.dump(2) + "\n";
}

namespace {

constexpr double kStep = 1e-6;

// Central differences of f over the stacked joint vector.
MatrixX numeric_jacobian(const std::function<VectorX(const VectorX&)>& f, const VectorX& q) {
  const VectorX f0 = f(q);
  MatrixX j(f0.size(), q.size());
  for (Eigen::Index k = 0; k < q.size(); ++k) {
    VectorX qp = q;
    VectorX qm = q;
    qp[k] += kStep;
    qm[k] -= kStep;
    j.col(k) = (f(qp) - f(qm)) / (2.0 * kStep);
  }
  return j;
}

double relative_error(const MatrixX& analytic, const MatrixX& numeric) {
  return (analytic - numeric).norm() / std::max(numeric.norm(), 1e-9);
}

VectorX scalar(double v) { return VectorX::Constant(1, v); }

}  // namespace

JacobianAudit audit_jacobians(int samples, std::uint64_t seed, double tolerance) {
  JacobianAudit audit;
  audit.tolerance = tolerance;
  audit.seed = seed;
  const RobotModel ma = reference_model();
  RobotModel mb = reference_model();
  mb.base = UnitDualQuaternion(UnitQuaternion::from_axis_angle(Vector3::UnitZ(), M_PI), PureQuaternion(0.45, 0.05, 0.0));
  const int na = ma.dof();
  const int nb = mb.dof();

  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double lo, double hi) { return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  const std::vector<std::string> names{"translation", "rotation",    "line",          "point_line",
                                       "point_plane", "shaft_line",  "shaft_segment"};
  std::vector<double> worst(names.size(), 0.0);

  auto split = [&](const VectorX& q) { return std::pair{evaluate_kinematics(ma, q.head(na)), evaluate_kinematics(mb, q.tail(nb))}; };
  const PureQuaternion z(0.0, 0.0, 1.0);

  for (int i = 0; i < samples; ++i) {
    VectorX q(na + nb);
    for (Eigen::Index k = 0; k < q.size(); ++k) {
      q[k] = uniform(-0.9 * M_PI, 0.9 * M_PI);
    }
    const auto [a, b] = split(q);
    const VectorX qa = q.head(na);

    worst[0] = std::max(worst[0], relative_error(a.translation_jacobian, numeric_jacobian([&](const VectorX& x) -> VectorX {
      return evaluate_kinematics(ma, x).tip(); }, qa)));
    worst[1] = std::max(worst[1], relative_error(a.rotation_jacobian, numeric_jacobian([&](const VectorX& x) -> VectorX {
      return forward_kinematics(ma, x).rotation().quaternion().vec4(); }, qa)));
    worst[2] = std::max(worst[2], relative_error(a.shaft_jacobian, numeric_jacobian([&](const VectorX& x) -> VectorX {
      const PluckerLine l = line_from_pose(forward_kinematics(ma, x), z);
      Vector8 v;
      v << 0.0, l.direction(), 0.0, l.moment();
      return v; }, qa)));

    auto stacked = [](const RowJacobian& f, const RowJacobian& s) {
      MatrixX row(1, f.size() + s.size());
      row << f, s;
      return row;
    };

    const DistanceJacobian pl = point_line_distance_jacobians(a.shaft, a.shaft_jacobian, b.tip(), b.translation_jacobian);
    worst[3] = std::max(worst[3], relative_error(stacked(pl.first, pl.second), numeric_jacobian([&](const VectorX& x) {
      const auto [sa, sb] = split(x);
      return scalar(point_line_sq_distance(sa.shaft, sb.tip())); }, q)));

    const Plane plane = plane_from_pose(a.pose, z, 0.004);
    const DistanceJacobian pp = point_plane_distance_jacobians(plane, plane_jacobian(a.pose_jacobian, a.pose, z), b.tip(),
                                                               b.translation_jacobian);
    worst[4] = std::max(worst[4], relative_error(stacked(pp.first, pp.second), numeric_jacobian([&](const VectorX& x) {
      const auto [sa, sb] = split(x);
      return scalar(point_plane_signed_distance(plane_from_pose(sa.pose, z, 0.004), sb.tip())); }, q)));

    for (const ShaftModel model : {ShaftModel::line, ShaftModel::segment}) {
      const std::size_t slot = model == ShaftModel::line ? 5 : 6;
      const ShaftDistance sd = shaft_distance_jacobians(a, b, model, 0.3);
      worst[slot] = std::max(worst[slot], relative_error(stacked(sd.first, sd.second), numeric_jacobian([&](const VectorX& x) {
        const auto [sa, sb] = split(x);
        return scalar(shaft_distance_jacobians(sa, sb, model, 0.3).value); }, q)));
    }
  }

  for (std::size_t k = 0; k < names.size(); ++k) {
    audit.checks.push_back({names[k], samples, worst[k], worst[k] <= tolerance});
  }
  return audit;
}

}  // namespace vfix
