#include "oracles.hpp"
#include "vfix/geometry.hpp"

#include <doctest.h>

using namespace vfix;

namespace {

// 1-D golden-section search on a unimodal function.
double golden_min(const std::function<double(double)>& f, double lo, double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  for (int k = 0; k < 200; ++k) {
    const double c = b - g * (b - a);
    const double d = a + g * (b - a);
    if (f(c) < f(d)) {
      b = d;
    } else {
      a = c;
    }
  }
  return f(0.5 * (a + b));
}

UnitDualQuaternion random_pose(oracle::Rng& rng) {
  return {UnitQuaternion::from_axis_angle(rng.unit3(), rng.uniform(-M_PI, M_PI)), PureQuaternion(rng.vec3())};
}

}  // namespace

TEST_CASE("Plücker validation") {
  CHECK_THROWS_AS(PluckerLine(PureQuaternion(0, 0, 2), PureQuaternion()), std::invalid_argument);
  CHECK_THROWS_AS(PluckerLine(PureQuaternion(0, 0, 1), PureQuaternion(0, 0, 1)), std::invalid_argument);
  const PluckerLine l = PluckerLine::through(Vector3(1, 2, 3), Vector3(0, 0, 5));
  CHECK((l.direction() - Vector3::UnitZ()).norm() <= 1e-15);
  CHECK((l.moment() - Vector3(1, 2, 3).cross(Vector3::UnitZ())).norm() <= 1e-15);
  CHECK((l.point() - Vector3(1, 2, 0)).norm() <= 1e-15);
}

TEST_CASE("line from pose") {
  const PluckerLine z = line_from_pose(UnitDualQuaternion(), PureQuaternion(0, 0, 1));
  CHECK(z.direction() == Vector3::UnitZ());
  CHECK(z.moment().norm() == 0.0);

  const PluckerLine shifted = line_from_pose(UnitDualQuaternion::from_translation(Vector3::UnitX()), PureQuaternion(0, 0, 1));
  CHECK((shifted.direction() - Vector3::UnitZ()).norm() <= 1e-15);
  CHECK((shifted.moment() + Vector3::UnitY()).norm() <= 1e-15);

  oracle::Rng rng(21);
  for (int k = 0; k < 200; ++k) {
    const UnitDualQuaternion x = random_pose(rng);
    const PluckerLine l = line_from_pose(x, PureQuaternion(rng.unit3()));
    CHECK(point_line_sq_distance(l, x.translation().vec3()) <= 1e-20);
    CHECK(std::abs(l.direction().norm() - 1.0) <= 1e-9);
    CHECK(std::abs(l.direction().dot(l.moment())) <= 1e-9);
  }
}

TEST_CASE("plane from pose") {
  const Plane z0 = plane_from_pose(UnitDualQuaternion(), PureQuaternion(0, 0, 1), 0.0);
  CHECK(point_plane_signed_distance(z0, Vector3(4, -2, 0)) == 0.0);
  const Plane low = plane_from_pose(UnitDualQuaternion(), PureQuaternion(0, 0, 1), -0.008);
  CHECK(point_plane_signed_distance(low, Vector3(1, 1, -0.008)) == doctest::Approx(0.0));
  CHECK(point_plane_signed_distance(low, Vector3(0, 0, 0)) == doctest::Approx(0.008));

  oracle::Rng rng(22);
  for (int k = 0; k < 200; ++k) {
    const UnitDualQuaternion x = random_pose(rng);
    const Vector3 axis = rng.unit3();
    const double offset = rng.uniform(-0.1, 0.1);
    const Plane p = plane_from_pose(x, PureQuaternion(axis), offset);
    const Vector3 on = x.translation().vec3() + offset * p.normal();
    CHECK(std::abs(point_plane_signed_distance(p, on)) <= 1e-10);
  }
}

TEST_CASE("point-line distance") {
  const PluckerLine z = PluckerLine::through(Vector3::Zero(), Vector3::UnitZ());
  CHECK(point_line_sq_distance(z, Vector3(2, 0, 0)) == doctest::Approx(4.0));
  CHECK(point_line_sq_distance(z, Vector3(0, 0, 7)) == 0.0);

  oracle::Rng rng(23);
  for (int k = 0; k < 300; ++k) {
    const Vector3 a = rng.vec3();
    const Vector3 dir = rng.unit3();
    const Vector3 p = rng.vec3();
    const PluckerLine l = PluckerLine::through(a, dir);
    const double expected = golden_min([&](double s) { return (a + s * dir - p).squaredNorm(); }, -20.0, 20.0);
    CHECK(std::abs(point_line_sq_distance(l, p) - expected) <= 1e-9 * (1.0 + expected));
  }
}

TEST_CASE("point-plane distance") {
  const Plane z5(PureQuaternion(0, 0, 1), 5.0);
  CHECK(point_plane_signed_distance(z5, Vector3(0, 0, 3)) == doctest::Approx(-2.0));
  CHECK(point_plane_signed_distance(z5, Vector3(9, 1, 5)) == 0.0);
  oracle::Rng rng(24);
  for (int k = 0; k < 100; ++k) {
    const Vector3 n = rng.unit3();
    const double d = rng.normal();
    const Vector3 p = rng.vec3();
    const Plane a(PureQuaternion(n), d);
    const Plane b(PureQuaternion(-n), -d);
    CHECK(point_plane_signed_distance(a, p) == doctest::Approx(-point_plane_signed_distance(b, p)));
  }
}

TEST_CASE("line-line distance") {
  const PluckerLine z = PluckerLine::through(Vector3::Zero(), Vector3::UnitZ());
  const PluckerLine x1 = PluckerLine::through(Vector3::UnitX(), Vector3::UnitZ());
  CHECK(line_line_distance(z, x1) == doctest::Approx(1.0));
  const PluckerLine cross = PluckerLine::through(Vector3(0, 0, 3), Vector3::UnitY());
  CHECK(line_line_distance(z, cross) == doctest::Approx(0.0));

  oracle::Rng rng(25);
  for (int k = 0; k < 100; ++k) {
    const Vector3 a = rng.vec3();
    const Vector3 da = rng.unit3();
    const Vector3 b = rng.vec3();
    const Vector3 db = rng.unit3();
    auto f = [&](double s, double t) { return (a + s * da - b - t * db).squaredNorm(); };
    // Coarse grid, then alternating golden-section refinement.
    double best = std::numeric_limits<double>::infinity();
    double s0 = 0.0;
    double t0 = 0.0;
    for (double s = -20.0; s <= 20.0; s += 0.25) {
      for (double t = -20.0; t <= 20.0; t += 0.25) {
        if (f(s, t) < best) {
          best = f(s, t);
          s0 = s;
          t0 = t;
        }
      }
    }
    for (int it = 0; it < 60; ++it) {
      const double g = 0.5 * (std::sqrt(5.0) - 1.0);
      for (int axis = 0; axis < 2; ++axis) {
        double lo = (axis == 0 ? s0 : t0) - 1.0;
        double hi = (axis == 0 ? s0 : t0) + 1.0;
        auto h = [&](double v) { return axis == 0 ? f(v, t0) : f(s0, v); };
        for (int j = 0; j < 100; ++j) {
          const double c = hi - g * (hi - lo);
          const double d = lo + g * (hi - lo);
          if (h(c) < h(d)) {
            hi = d;
          } else {
            lo = c;
          }
        }
        (axis == 0 ? s0 : t0) = 0.5 * (lo + hi);
      }
    }
    const double expected = std::sqrt(f(s0, t0));
    const double got = line_line_distance(PluckerLine::through(a, da), PluckerLine::through(b, db));
    CHECK(std::abs(got - expected) <= 1e-6);
    CHECK(line_line_sq_distance(PluckerLine::through(a, da), PluckerLine::through(b, db)) ==
          doctest::Approx(got * got).epsilon(1e-12));
  }
}

TEST_CASE("parallel lines use the point form") {
  const PluckerLine a = PluckerLine::through(Vector3::Zero(), Vector3::UnitZ());
  const PluckerLine b = PluckerLine::through(Vector3(0.003, 0.004, 1.0), -Vector3::UnitZ());
  CHECK(line_line_distance(a, b) == doctest::Approx(0.005));
}

TEST_CASE("distances are invariant under rigid motions") {
  oracle::Rng rng(26);
  for (int k = 0; k < 500; ++k) {
    const UnitDualQuaternion g = random_pose(rng);
    const UnitQuaternion r = g.rotation();
    const Vector3 t = g.translation().vec3();
    auto move = [&](const Vector3& p) { return Vector3(r.rotate(p) + t); };
    const Vector3 a = rng.vec3();
    const Vector3 da = rng.unit3();
    const Vector3 b = rng.vec3();
    const Vector3 db = rng.unit3();
    const Vector3 p = rng.vec3();
    const PluckerLine la = PluckerLine::through(a, da);
    const PluckerLine lb = PluckerLine::through(b, db);
    const PluckerLine ma = PluckerLine::through(move(a), r.rotate(da));
    const PluckerLine mb = PluckerLine::through(move(b), r.rotate(db));
    CHECK(std::abs(line_line_distance(la, lb) - line_line_distance(ma, mb)) <= 1e-9);
    CHECK(std::abs(point_line_sq_distance(la, p) - point_line_sq_distance(ma, move(p))) <= 1e-9);
    const Plane pl(PureQuaternion(da), a.dot(da));
    const Plane mpl(PureQuaternion(r.rotate(da)), move(a).dot(r.rotate(da)));
    CHECK(std::abs(point_plane_signed_distance(pl, p) - point_plane_signed_distance(mpl, move(p))) <= 1e-9);
  }
}

TEST_CASE("closest point on a cylinder") {
  const Cylinder c(PluckerLine::through(Vector3::Zero(), Vector3::UnitZ()), 0.010);
  CHECK((closest_point_on_cylinder(c, Vector3(0.025, 0, 0)).point - Vector3(0.010, 0, 0)).norm() <= 1e-15);
  const Vector3 on(0.006, 0.008, 0.3);
  CHECK((closest_point_on_cylinder(c, on).point - on).norm() <= 1e-15);

  const CylinderProjection axis = closest_point_on_cylinder(c, Vector3(0, 0, 0.2));
  CHECK(axis.degenerate);
  CHECK(std::abs(std::sqrt(point_line_sq_distance(c.axis, axis.point)) - 0.010) <= 1e-15);
  const CylinderProjection fb = closest_point_on_cylinder(c, Vector3(0, 0, 0.2), Vector3::UnitY());
  CHECK((fb.point - Vector3(0, 0.010, 0.2)).norm() <= 1e-15);

  oracle::Rng rng(27);
  for (int k = 0; k < 20; ++k) {
    const Vector3 dir = rng.unit3();
    const Vector3 base = rng.vec3(0.05);
    const Cylinder cyl(PluckerLine::through(base, dir), rng.uniform(0.005, 0.03));
    const Vector3 p = base + rng.vec3(0.04);
    const Vector3 got = closest_point_on_cylinder(cyl, p).point;
    const Vector3 u = reference_radial_direction(dir);
    const Vector3 v = dir.cross(u);
    const double h0 = (p - base).dot(dir);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
      for (int j = 0; j < 100; ++j) {
        const double phi = 2.0 * M_PI * i / 100.0;
        const double h = h0 + 0.002 * (j - 50) / 50.0;
        const Vector3 s = base + h * dir + cyl.radius * (std::cos(phi) * u + std::sin(phi) * v);
        best = std::min(best, (s - p).norm());
      }
    }
    CHECK((got - p).norm() <= best + 1e-12);
    CHECK(std::abs(std::sqrt(point_line_sq_distance(cyl.axis, got)) - cyl.radius) <= 1e-12);
  }
}
