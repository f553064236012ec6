#include "oracles.hpp"
#include "vfix/vfi.hpp"

#include <doctest.h>

using namespace vfix;

namespace {

struct Pair {
  RobotModel a = reference_model();
  RobotModel b = reference_model();
  Pair() {
    b.base = UnitDualQuaternion(UnitQuaternion::from_axis_angle(Vector3::UnitZ(), M_PI), PureQuaternion(0.5, 0.1, 0.0));
  }
  KinematicState first(const VectorX& q) const { return evaluate_kinematics(a, q.head(6)); }
  KinematicState second(const VectorX& q) const { return evaluate_kinematics(b, q.tail(6)); }
};

VectorX random_pair_q(oracle::Rng& rng) { return rng.vector(12, -2.5, 2.5); }

MatrixX stacked(const RowJacobian& f, const RowJacobian& s) {
  MatrixX row(1, f.size() + s.size());
  row << f, s;
  return row;
}

VectorX scalar(double v) { return VectorX::Constant(1, v); }

double relative(const MatrixX& a, const MatrixX& b) { return (a - b).norm() / std::max(b.norm(), 1e-9); }

const StackLayout kLayout{6, 6};

}  // namespace

TEST_CASE("distance Jacobians match central differences") {
  const Pair p;
  oracle::Rng rng(41);
  const PureQuaternion z(0, 0, 1);
  for (int k = 0; k < 200; ++k) {
    const VectorX q = random_pair_q(rng);
    const KinematicState a = p.first(q);
    const KinematicState b = p.second(q);

    const DistanceJacobian pl = point_line_distance_jacobians(a.shaft, a.shaft_jacobian, b.tip(), b.translation_jacobian);
    CHECK(pl.value == doctest::Approx(point_line_sq_distance(a.shaft, b.tip())));
    CHECK(relative(stacked(pl.first, pl.second), oracle::finite_difference([&](const VectorX& x) {
            return scalar(point_line_sq_distance(p.first(x).shaft, p.second(x).tip()));
          }, q)) <= 1e-6);

    const PlaneJacobian jp = plane_jacobian(a.pose_jacobian, a.pose, z);
    const Plane plane = plane_from_pose(a.pose, z, -0.008);
    const DistanceJacobian pp = point_plane_distance_jacobians(plane, jp, b.tip(), b.translation_jacobian);
    CHECK(relative(stacked(pp.first, pp.second), oracle::finite_difference([&](const VectorX& x) {
            return scalar(point_plane_signed_distance(plane_from_pose(p.first(x).pose, z, -0.008), p.second(x).tip()));
          }, q)) <= 1e-6);

    const LineLineDistanceJacobian ll = line_line_distance_jacobians(a.shaft, a.shaft_jacobian, b.shaft, b.shaft_jacobian);
    CHECK(relative(stacked(ll.first, ll.second), oracle::finite_difference([&](const VectorX& x) {
            return scalar(line_line_sq_distance(p.first(x).shaft, p.second(x).shaft));
          }, q)) <= 1e-6);

    const DistanceJacobian tt = point_point_distance_jacobians(a.tip(), a.translation_jacobian, b.tip(), b.translation_jacobian);
    CHECK(relative(stacked(tt.first, tt.second), oracle::finite_difference([&](const VectorX& x) {
            return scalar((p.first(x).tip() - p.second(x).tip()).squaredNorm());
          }, q)) <= 1e-6);

    // Segment distance: only away from the seams where the closest pair changes case.
    const ShaftDistance seg = shaft_distance_jacobians(a, b, ShaftModel::segment, 0.3);
    const auto value_at = [&](const VectorX& x) {
      return shaft_distance_jacobians(p.first(x), p.second(x), ShaftModel::segment, 0.3);
    };
    bool smooth = true;
    for (int j = 0; j < 12 && smooth; ++j) {
      VectorX plus = q;
      VectorX minus = q;
      plus[j] += 1e-5;
      minus[j] -= 1e-5;
      smooth = value_at(plus).pair == seg.pair && value_at(minus).pair == seg.pair;
    }
    if (smooth) {
      CHECK(relative(stacked(seg.first, seg.second),
                     oracle::finite_difference([&](const VectorX& x) { return scalar(value_at(x).value); }, q)) <= 1e-6);
    }

    // Frozen robots: zero rate.
    CHECK((pl.first * VectorX::Zero(6))(0) + (pl.second * VectorX::Zero(6))(0) == 0.0);
  }
}

TEST_CASE("point sliding along the line does not change the distance") {
  const PluckerLine line = PluckerLine::through(Vector3(0.1, 0.0, 0.0), Vector3(1, 2, 2).normalized());
  const PoseJacobian frozen = PoseJacobian::Zero(8, 2);
  Eigen::Matrix<double, 3, Eigen::Dynamic> jp(3, 2);
  jp.col(0) = 3.0 * line.direction();
  jp.col(1) = -0.5 * line.direction();
  const DistanceJacobian d = point_line_distance_jacobians(line, frozen, Vector3(0.3, -0.2, 0.5), jp);
  CHECK(d.second.norm() <= 1e-15);
}

TEST_CASE("moving a point along a plane normal") {
  const Plane plane(PureQuaternion(0, 0, 1), 0.02);
  Eigen::Matrix<double, 3, Eigen::Dynamic> jp = Eigen::Matrix<double, 3, Eigen::Dynamic>::Zero(3, 1);
  jp(2, 0) = 1.0;
  const DistanceJacobian d =
      point_plane_distance_jacobians(plane, PlaneJacobian::Zero(4, 1), Vector3(0.1, 0.2, 0.0), jp);
  const double v = 0.004;
  CHECK((d.second * VectorX::Constant(1, v))(0) == doctest::Approx(v));
  CHECK((d.second * VectorX::Constant(1, -v))(0) == doctest::Approx(-v));
}

TEST_CASE("zone rows") {
  const RowJacobian j = RowJacobian::Constant(3, 0.5);
  const VfiRow on = vfi_row(j, 0.01, ZoneSpec::constant(ZoneKind::restricted, 30.0, 0.01), 0.0, RowTag::plane);
  CHECK(on.bound == 0.0);
  CHECK(on.coefficients == -j);

  const VfiRow damper = vfi_row(j, 0.03, ZoneSpec::constant(ZoneKind::restricted, 30.0, 0.01), 0.0, RowTag::plane);
  CHECK(damper.bound == doctest::Approx(30.0 * 0.02));
  const VfiRow safe = vfi_row(j, 0.03, ZoneSpec::constant(ZoneKind::safe, 30.0, 0.05), 0.0, RowTag::plane);
  CHECK(safe.coefficients == j);
  CHECK(safe.bound == doctest::Approx(30.0 * 0.02));

  ZoneSpec moving = ZoneSpec::constant(ZoneKind::safe, 10.0, 0.0);
  moving.safe_distance_rate = [](double) { return 0.2; };
  CHECK(vfi_row(j, 0.0, moving, 0.0, RowTag::plane, 0.05).bound == doctest::Approx(-(0.05 - 0.2)));
  moving.feed_forward = false;
  CHECK(vfi_row(j, 0.0, moving, 0.0, RowTag::plane, 0.05).bound == 0.0);

  CHECK_THROWS_AS(vfi_row(j, 0.0, ZoneSpec::constant(ZoneKind::safe, -1.0, 0.0), 0.0, RowTag::plane),
                  std::invalid_argument);
}

TEST_CASE("moving boundary: feed-forward removes the tracking lag") {
  // ẋ = u with u pushing toward the boundary; the safe zone is x ≤ p(t) = A sin ωt.
  const double eta = 30.0;
  const double a = 0.01;
  const double w = 2.0 * M_PI * 0.1;
  const double dt = 1e-4;
  auto run = [&](bool feed_forward) {
    ZoneSpec zone;
    zone.kind = ZoneKind::safe;
    zone.gain = eta;
    zone.safe_distance = [&](double t) { return a * std::sin(w * t); };
    zone.safe_distance_rate = [&](double t) { return a * w * std::cos(w * t); };
    zone.feed_forward = feed_forward;
    double x = 0.0;
    double worst = 0.0;
    for (int k = 0; k < 200000; ++k) {
      const double t = k * dt;
      const VfiRow row = vfi_row(RowJacobian::Constant(1, 1.0), x, zone, t, RowTag::plane);
      const double u = std::min(1.0, row.bound);
      // Exact flow over the step for the active row: e' = −η e (+ lag without feed-forward).
      x += u * dt;
      if (t > 10.0) {
        worst = std::max(worst, std::abs(a * std::sin(w * (t + dt)) - x));
      }
    }
    return worst;
  };
  const double with = run(true);
  const double without = run(false);
  CHECK(with <= 2e-5);
  CHECK(without >= 0.9 * a * w / eta);
  CHECK(with <= 0.05 * without);
}

TEST_CASE("entry-sphere row") {
  const RobotModel m = reference_model();
  const KinematicState s = evaluate_kinematics(m, VectorX::Constant(6, 0.4));
  const double d_safe = 0.0025 * 0.0025;
  const Vector3 on_shaft = s.tip() - 0.1 * s.shaft.direction();
  const VfiRow centred = rcm_constraint(s, 0, kLayout, on_shaft, d_safe, 30.0);
  CHECK(centred.bound == doctest::Approx(30.0 * 6.25e-6).epsilon(1e-9));
  CHECK(centred.tag == RowTag::rcm);
  CHECK(centred.coefficients.tail(6).norm() == 0.0);

  const Vector3 normal = reference_radial_direction(s.shaft.direction());
  const VfiRow edge = rcm_constraint(s, 0, kLayout, on_shaft + 0.0025 * normal, d_safe, 30.0);
  CHECK(std::abs(edge.bound) <= 1e-15);

  // Row coefficients are the derivative of the squared distance (safe zone: +J).
  const Vector3 c = on_shaft + 0.001 * normal;
  const MatrixX fd = oracle::finite_difference([&](const VectorX& q) {
    return scalar(point_line_sq_distance(evaluate_kinematics(m, q).shaft, c));
  }, s.q);
  CHECK(relative(rcm_constraint(s, 0, kLayout, c, d_safe, 30.0).coefficients.head(6), fd) <= 1e-6);
  CHECK(rcm_constraint(s, 1, kLayout, c, d_safe, 30.0).coefficients.head(6).norm() == 0.0);
}

TEST_CASE("shaft-shaft row") {
  const Pair p;
  oracle::Rng rng(42);
  for (int k = 0; k < 50; ++k) {
    const VectorX q = random_pair_q(rng);
    const KinematicState a = p.first(q);
    const KinematicState b = p.second(q);
    const double d = line_line_distance(a.shaft, b.shaft);
    if (d < 1e-3) {
      continue;
    }
    const VfiRow boundary = shaft_shaft_constraint(a, b, kLayout, d, 30.0, ShaftModel::line, 0.3);
    CHECK(std::abs(boundary.bound) <= 1e-14);
    const MatrixX fd = oracle::finite_difference([&](const VectorX& x) {
      return scalar(line_line_sq_distance(p.first(x).shaft, p.second(x).shaft));
    }, q);
    CHECK(relative(-boundary.coefficients, fd) <= 1e-6);
  }
  const VectorX q = random_pair_q(rng);
  CHECK_THROWS_AS(shaft_shaft_constraint(p.first(q), p.second(q), kLayout, 0.0, 30.0, ShaftModel::line, 0.3),
                  std::invalid_argument);
}

TEST_CASE("segment model picks the tip when the segments do not overlap") {
  // Two parallel vertical shafts, the second entirely above the first.
  RobotModel up;
  up.name = "up";
  up.joints = {{0.0, 0.0, 0.0, 0.0}};
  up.q_min = VectorX::Constant(1, -3.0);
  up.q_max = VectorX::Constant(1, 3.0);
  RobotModel high = up;
  high.base = UnitDualQuaternion::from_translation(Vector3(0.01, 0.0, 1.0));
  const KinematicState a = evaluate_kinematics(up, VectorX::Zero(1));
  const KinematicState b = evaluate_kinematics(high, VectorX::Zero(1));
  const ShaftDistance line = shaft_distance_jacobians(a, b, ShaftModel::line, 0.3);
  const ShaftDistance seg = shaft_distance_jacobians(a, b, ShaftModel::segment, 0.3);
  CHECK(std::sqrt(line.value) == doctest::Approx(0.01));
  // The segments run downward from each tip: [0, -0.3] and [1.0, 0.7], gap 0.7.
  CHECK(std::sqrt(seg.value) == doctest::Approx(std::hypot(0.01, 0.7)));
  CHECK(seg.pair == ShaftDistance::Case::point_point);
}

TEST_CASE("looping fixture rows") {
  const LvfParams defaults;
  CHECK(defaults.r_max == 0.020);
  CHECK(defaults.d_pi_min == -0.008);
  CHECK(defaults.d_pi_max == 0.010);

  const Pair p;
  oracle::Rng rng(43);
  const VectorX q = random_pair_q(rng);
  const KinematicState a = p.first(q);
  const KinematicState b = p.second(q);
  LvfParams on = defaults;
  on.r_max = std::sqrt(point_line_sq_distance(a.shaft, b.tip()));
  const ConstraintSet set = lvf_constraints(a, b, kLayout, on, 30.0);
  REQUIRE(set.size() == 4);
  CHECK(set.rows()[0].tag == RowTag::shaft_shaft);
  CHECK(set.rows()[1].tag == RowTag::lvf_cylinder);
  CHECK(std::abs(set.rows()[1].bound) <= 1e-14);
  CHECK(set.rows()[2].tag == RowTag::lvf_plane_min);
  CHECK(set.rows()[3].tag == RowTag::lvf_plane_max);

  // Band rows bound the height h of t₂ above the first tip along its shaft.
  const double h = (b.tip() - a.tip()).dot(a.shaft.direction());
  CHECK(set.rows()[2].bound == doctest::Approx(30.0 * (h - defaults.d_pi_min)));
  CHECK(set.rows()[3].bound == doctest::Approx(30.0 * (defaults.d_pi_max - h)));

  LvfParams bad = defaults;
  bad.d_pi_min = 0.02;
  CHECK_THROWS_AS(lvf_constraints(a, b, kLayout, bad, 30.0), std::invalid_argument);
  bad = defaults;
  bad.r_max = 0.0;
  CHECK_THROWS_AS(lvf_constraints(a, b, kLayout, bad, 30.0), std::invalid_argument);

  const MatrixX w = set.matrix(12);
  CHECK(w.rows() == 4);
  CHECK(w.cols() == 12);
  CHECK(set.bounds().size() == 4);
  CHECK(ConstraintSet{}.matrix(12).rows() == 0);
}

TEST_CASE("joint limit rows") {
  const VectorX q_min = VectorX::Constant(2, -1.0);
  const VectorX q_max = VectorX::Constant(2, 1.0);
  const StackLayout layout{2, 2};
  const ConstraintSet mid = joint_limit_constraints(VectorX::Zero(2), q_min, q_max, 1.0, 1, layout);
  REQUIRE(mid.size() == 4);
  CHECK(mid.rows()[0].bound == mid.rows()[1].bound);
  CHECK(mid.rows()[0].bound > 0.0);
  CHECK(mid.rows()[0].coefficients == (RowJacobian(4) << 0, 0, 1, 0).finished());
  CHECK(mid.rows()[1].coefficients == (RowJacobian(4) << 0, 0, -1, 0).finished());

  const ConstraintSet top = joint_limit_constraints(VectorX::Constant(2, 1.0), q_min, q_max, 1.0, 0, layout);
  CHECK(top.rows()[0].bound == 0.0);
  CHECK(top.rows()[1].bound == doctest::Approx(2.0));

  const ConstraintSet capped = joint_limit_constraints(VectorX::Zero(2), q_min, q_max, 1.0, 0, layout, 0.5);
  CHECK(capped.rows()[0].bound == 0.5);
  CHECK_THROWS_AS(joint_limit_constraints(VectorX::Zero(3), q_min, q_max, 1.0, 0, layout), std::invalid_argument);
}

TEST_CASE("names") {
  CHECK(to_string(RowTag::lvf_plane_min) == "lvf_plane_min");
  CHECK(shaft_model_from_string("line") == ShaftModel::line);
  CHECK(shaft_model_from_string(to_string(ShaftModel::segment)) == ShaftModel::segment);
  CHECK_THROWS_AS(shaft_model_from_string("tube"), std::invalid_argument);
}
