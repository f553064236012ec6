#include "vfix/kinematics.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vfix {

void RobotModel::validate() const {
  const auto n = static_cast<Eigen::Index>(joints.size());
  if (n == 0) {
    throw std::invalid_argument("robot model '" + name + "' has no joints");
  }
  if (q_min.size() != n || q_max.size() != n) {
    throw std::invalid_argument("robot model '" + name + "': joint limit vectors must have one entry per joint");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!(q_min[j] < q_max[j])) {
      throw std::invalid_argument("robot model '" + name + "': q_min[" + std::to_string(j) + "] >= q_max[" +
                                  std::to_string(j) + "]");
    }
  }
}

RobotModel reference_model() {
  RobotModel m;
  m.name = "reference_6r";
  const double half_pi = 0.5 * M_PI;
  m.joints = {
      {0.0, 0.200, 0.000, half_pi},
      {0.0, 0.000, 0.300, 0.0},
      {0.0, 0.000, 0.250, 0.0},
      {0.0, 0.110, 0.000, half_pi},
      {0.0, 0.100, 0.000, -half_pi},
      {0.0, 0.100, 0.000, 0.0},
  };
  m.effector = UnitDualQuaternion::from_translation(Vector3(0.0, 0.0, 0.200));
  m.q_min = VectorX::Constant(6, -170.0 * kDegree);
  m.q_max = VectorX::Constant(6, 170.0 * kDegree);
  return m;
}

namespace {

using nlohmann::json;

UnitDualQuaternion pose_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 8) {
    throw std::runtime_error("robot model: '" + field + "' must be an array of 8 numbers");
  }
  Vector8 v;
  for (int k = 0; k < 8; ++k) {
    v[k] = j.at(static_cast<std::size_t>(k)).get<double>();
  }
  v.tail<4>() *= kMillimeter;
  try {
    return UnitDualQuaternion(DualQuaternion::from_vec8(v));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error("robot model: '" + field + "': " + e.what());
  }
}

json pose_to_json(const UnitDualQuaternion& x) {
  Vector8 v = x.vec8();
  v.tail<4>() /= kMillimeter;
  json out = json::array();
  for (int k = 0; k < 8; ++k) {
    out.push_back(v[k]);
  }
  return out;
}

VectorX angles_from_json(const json& j, const std::string& field) {
  if (!j.is_array()) {
    throw std::runtime_error("robot model: '" + field + "' must be an array");
  }
  VectorX v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    v[static_cast<Eigen::Index>(k)] = j[k].get<double>() * kDegree;
  }
  return v;
}

}  // namespace

RobotModel robot_model_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("robot model: ") + e.what());
  }
  RobotModel m;
  try {
    m.name = j.value("name", std::string("unnamed"));
    for (const auto& row : j.at("dh")) {
      m.joints.push_back({row.at("theta").get<double>() * kDegree, row.at("d").get<double>() * kMillimeter,
                          row.at("a").get<double>() * kMillimeter, row.at("alpha").get<double>() * kDegree});
    }
    if (j.contains("base_pose")) {
      m.base = pose_from_json(j["base_pose"], "base_pose");
    }
    if (j.contains("effector_pose")) {
      m.effector = pose_from_json(j["effector_pose"], "effector_pose");
    }
    m.q_min = angles_from_json(j.at("q_min"), "q_min");
    m.q_max = angles_from_json(j.at("q_max"), "q_max");
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("robot model: ") + e.what());
  }
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(e.what());
  }
  return m;
}

RobotModel load_robot_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("robot model: cannot open " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return robot_model_from_json_text(buffer.str());
}

std::string robot_model_to_json_text(const RobotModel& model) {
  json j;
  j["name"] = model.name;
  j["dh"] = json::array();
  for (const auto& joint : model.joints) {
    j["dh"].push_back({{"theta", joint.theta / kDegree},
                       {"d", joint.d / kMillimeter},
                       {"a", joint.a / kMillimeter},
                       {"alpha", joint.alpha / kDegree}});
  }
  j["base_pose"] = pose_to_json(model.base);
  j["effector_pose"] = pose_to_json(model.effector);
  j["q_min"] = json::array();
  j["q_max"] = json::array();
  for (Eigen::Index k = 0; k < model.q_min.size(); ++k) {
    j["q_min"].push_back(model.q_min[k] / kDegree);
    j["q_max"].push_back(model.q_max[k] / kDegree);
  }
  return j.dump(2);
}

namespace {

DualQuaternion dh_link(const DhJoint& joint, double q) {
  const double th = 0.5 * (q + joint.theta);
  const double al = 0.5 * joint.alpha;
  const Quaternion rz{std::cos(th), 0.0, 0.0, std::sin(th)};
  const Quaternion rx{std::cos(al), std::sin(al), 0.0, 0.0};
  const Quaternion r = rz * rx;
  // Translation (a, 0, d) expressed after rz.
  const Quaternion t = rz * Quaternion{0.0, joint.a, 0.0, joint.d} * rz.conj();
  return {r, 0.5 * (t * r)};
}

void require_dimension(const RobotModel& model, const VectorX& q) {
  if (q.size() != model.dof()) {
    throw std::invalid_argument("joint vector has " + std::to_string(q.size()) + " entries, model '" + model.name +
                                "' has " + std::to_string(model.dof()) + " joints");
  }
}

}  // namespace

UnitDualQuaternion forward_kinematics(const RobotModel& model, const VectorX& q) {
  require_dimension(model, q);
  DualQuaternion x = model.base;
  for (int j = 0; j < model.dof(); ++j) {
    x = x * dh_link(model.joints[static_cast<std::size_t>(j)], q[j]);
  }
  return UnitDualQuaternion(x * model.effector.dual_quaternion());
}

PoseJacobian pose_jacobian(const RobotModel& model, const VectorX& q) {
  require_dimension(model, q);
  const int n = model.dof();
  const DualQuaternion x = forward_kinematics(model, q);
  const DualQuaternion k_axis{kK, Quaternion{}};
  PoseJacobian jac(8, n);
  DualQuaternion prefix = model.base;
  for (int j = 0; j < n; ++j) {
    // Joint axis as a Plücker line: prefix k̂ prefix*.
    const DualQuaternion axis = prefix * k_axis * prefix.conj();
    jac.col(j) = (0.5 * (axis * x)).vec8();
    prefix = prefix * dh_link(model.joints[static_cast<std::size_t>(j)], q[j]);
  }
  return jac;
}

TranslationJacobian translation_jacobian(const PoseJacobian& jx, const UnitDualQuaternion& x) {
  const DualQuaternion& dq = x;
  // t = 2 d p*  =>  ṫ = 2 (ḋ p* + d ṗ*).
  const Eigen::Matrix<double, 4, Eigen::Dynamic> jt =
      2.0 * (hamilton_minus(dq.primary.conj()) * jx.bottomRows<4>() +
             hamilton_plus(dq.dual) * conjugation_matrix4() * jx.topRows<4>());
  return jt.bottomRows<3>();
}

RotationJacobian rotation_jacobian(const PoseJacobian& jx) { return jx.topRows<4>(); }

PoseJacobian line_jacobian(const PoseJacobian& jx, const UnitDualQuaternion& x, const PureQuaternion& axis) {
  const Quaternion r = x.rotation().quaternion();
  const Quaternion a = axis.quaternion();
  const RotationJacobian jr = rotation_jacobian(jx);
  // l = r a r*  =>  l̇ = ṙ a r* + r a ṙ*.
  const Eigen::Matrix<double, 4, Eigen::Dynamic> jl =
      hamilton_minus(a * r.conj()) * jr + hamilton_plus(r * a) * conjugation_matrix4() * jr;
  const Vector3 l = (r * a * r.conj()).imag();
  const Vector3 t = x.translation().vec3();
  const TranslationJacobian jt = translation_jacobian(jx, x);
  // m = t × l  =>  ṁ = ṫ × l + t × l̇.
  const Eigen::Matrix<double, 3, Eigen::Dynamic> jm = -skew(l) * jt + skew(t) * jl.bottomRows<3>();
  PoseJacobian out = PoseJacobian::Zero(8, jx.cols());
  out.topRows<4>() = jl;
  out.bottomRows<3>() = jm;
  return out;
}

KinematicState evaluate_kinematics(const RobotModel& model, const VectorX& q) {
  KinematicState s;
  s.q = q;
  s.pose = forward_kinematics(model, q);
  s.pose_jacobian = pose_jacobian(model, q);
  s.translation_jacobian = translation_jacobian(s.pose_jacobian, s.pose);
  s.rotation_jacobian = rotation_jacobian(s.pose_jacobian);
  const PureQuaternion z_axis(0.0, 0.0, 1.0);
  s.shaft = line_from_pose(s.pose, z_axis);
  s.shaft_jacobian = line_jacobian(s.pose_jacobian, s.pose, z_axis);
  return s;
}

}  // namespace vfix
