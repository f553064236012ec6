#include "oracles.hpp"
#include "vfix/quaternion.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace vfix;

namespace {

// Hamilton product written out component by component.
Quaternion product_oracle(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z, a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x, a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

Quaternion random_quaternion(oracle::Rng& rng) { return {rng.normal(), rng.normal(), rng.normal(), rng.normal()}; }

DualQuaternion random_dq(oracle::Rng& rng) { return {random_quaternion(rng), random_quaternion(rng)}; }

UnitQuaternion random_rotation(oracle::Rng& rng) {
  return UnitQuaternion::from_axis_angle(rng.unit3(), rng.uniform(-M_PI, M_PI));
}

UnitDualQuaternion random_pose(oracle::Rng& rng) {
  return {random_rotation(rng), PureQuaternion(rng.vec3(0.5))};
}

double distance(const Quaternion& a, const Quaternion& b) { return (a.vec4() - b.vec4()).cwiseAbs().maxCoeff(); }
double distance(const DualQuaternion& a, const DualQuaternion& b) {
  return (a.vec8() - b.vec8()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("basis products") {
  CHECK(kI * kJ == kK);
  CHECK(kJ * kK == kI);
  CHECK(kK * kI == kJ);
  CHECK(kI * kI == Quaternion(-1.0));
  const Quaternion h{0.3, -1.0, 2.0, 0.5};
  CHECK(Quaternion(1.0) * h == h);
  CHECK(h * Quaternion(1.0) == h);
  CHECK((Quaternion(1.0) + kI) * (Quaternion(1.0) + kJ) == Quaternion(1.0, 1.0, 1.0, 1.0));
}

TEST_CASE("conjugation") {
  CHECK((Quaternion(1.0) + kI).conj() == Quaternion(1.0, -1.0, 0.0, 0.0));
  CHECK(kK.conj() == -kK);
  const DualQuaternion x{kI, kJ};
  CHECK(x.conj() == DualQuaternion(-kI, -kJ));

  oracle::Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    const Quaternion h = random_quaternion(rng);
    const Quaternion hh = h * h.conj();
    CHECK(hh.imag().norm() <= 1e-12 * h.squared_norm());
    CHECK(std::abs(std::sqrt(hh.w) - h.norm()) <= 1e-12 * h.norm());

    const DualQuaternion d = random_dq(rng);
    const DualQuaternion c = d.conj();
    CHECK(c.primary == Quaternion(d.primary.w, -d.primary.x, -d.primary.y, -d.primary.z));
    CHECK(c.dual == Quaternion(d.dual.w, -d.dual.x, -d.dual.y, -d.dual.z));
  }
}

TEST_CASE("products match the component oracle") {
  oracle::Rng rng(12);
  for (int k = 0; k < 1000; ++k) {
    const Quaternion a = random_quaternion(rng);
    const Quaternion b = random_quaternion(rng);
    CHECK(distance(a * b, product_oracle(a, b)) <= 1e-12 * (1.0 + a.norm() * b.norm()));
  }
}

TEST_CASE("dual unit behaves as epsilon") {
  const DualQuaternion ei{Quaternion{}, kI};
  const DualQuaternion ej{Quaternion{}, kJ};
  CHECK(ei * ej == DualQuaternion{});
  oracle::Rng rng(13);
  const DualQuaternion x = random_dq(rng);
  CHECK(DualQuaternion(Quaternion(1.0)) * x == x);
}

TEST_CASE("associativity and multiplicative norm") {
  oracle::Rng rng(14);
  for (int k = 0; k < 500; ++k) {
    const Quaternion a = random_quaternion(rng);
    const Quaternion b = random_quaternion(rng);
    const Quaternion c = random_quaternion(rng);
    const double scale = 1.0 + a.norm() * b.norm() * c.norm();
    CHECK(distance((a * b) * c, a * (b * c)) <= 1e-12 * scale);
    CHECK(std::abs((a * b).norm() - a.norm() * b.norm()) <= 1e-12 * scale);

    const DualQuaternion x = random_dq(rng);
    const DualQuaternion y = random_dq(rng);
    const DualQuaternion z = random_dq(rng);
    CHECK(distance((x * y) * z, x * (y * z)) <= 1e-11 * (1.0 + x.vec8().norm() * y.vec8().norm() * z.vec8().norm()));
  }
}

TEST_CASE("vec maps") {
  CHECK(vec4(Quaternion(1.0) + 2.0 * kI) == Vector4(1, 2, 0, 0));
  CHECK(vec3(kI + kJ) == Vector3(1, 1, 0));
  CHECK_THROWS_AS(vec3(Quaternion(0.5, 1.0, 0.0, 0.0)), std::invalid_argument);
  oracle::Rng rng(15);
  for (int k = 0; k < 100; ++k) {
    const DualQuaternion d = random_dq(rng);
    CHECK(DualQuaternion::from_vec8(d.vec8()) == d);
    const Vector8 v = d.vec8();
    CHECK(v.head<4>() == d.primary.vec4());
    CHECK(v.tail<4>() == d.dual.vec4());
  }
}

TEST_CASE("Hamilton matrices") {
  CHECK(hamilton_plus(Quaternion(1.0)) == Matrix4::Identity());
  CHECK(hamilton_minus(Quaternion(1.0)) == Matrix4::Identity());
  CHECK(hamilton_plus(kI) * kJ.vec4() == (kI * kJ).vec4());
  CHECK(conjugation_matrix4() * Vector4(1, 2, 3, 4) == Vector4(1, -2, -3, -4));

  oracle::Rng rng(16);
  for (int k = 0; k < 1000; ++k) {
    const Quaternion a = random_quaternion(rng);
    const Quaternion b = random_quaternion(rng);
    const Vector4 ab = product_oracle(a, b).vec4();
    const double tol = 1e-12 * (1.0 + a.norm() * b.norm());
    CHECK((hamilton_plus(a) * b.vec4() - ab).cwiseAbs().maxCoeff() <= tol);
    CHECK((hamilton_minus(b) * a.vec4() - ab).cwiseAbs().maxCoeff() <= tol);

    const DualQuaternion x = random_dq(rng);
    const DualQuaternion y = random_dq(rng);
    const Vector8 xy = (x * y).vec8();
    const double dtol = 1e-12 * (1.0 + x.vec8().norm() * y.vec8().norm());
    CHECK((hamilton_plus(x) * y.vec8() - xy).cwiseAbs().maxCoeff() <= dtol);
    CHECK((hamilton_minus(y) * x.vec8() - xy).cwiseAbs().maxCoeff() <= dtol);
  }
}

TEST_CASE("pure inner and cross products") {
  CHECK(pure_inner(kI, kI) == doctest::Approx(1.0));
  CHECK(pure_cross(kI, kJ) == kK);
  oracle::Rng rng(17);
  for (int k = 0; k < 200; ++k) {
    const Vector3 a = rng.vec3();
    const Vector3 b = rng.vec3();
    const Quaternion qa = Quaternion::pure(a);
    const Quaternion qb = Quaternion::pure(b);
    CHECK(std::abs(pure_inner(qa, qb) - a.dot(b)) <= 1e-12 * (1.0 + a.norm() * b.norm()));
    CHECK((vec3(pure_cross(qa, qb)) - a.cross(b)).norm() <= 1e-12 * (1.0 + a.norm() * b.norm()));
    CHECK(std::abs(pure_inner(qa, pure_cross(qa, qb))) <= 1e-12 * (1.0 + a.squaredNorm() * b.norm()));
  }
  CHECK_THROWS_AS(pure_inner(Quaternion(1.0), kI), std::invalid_argument);
}

TEST_CASE("unit quaternion construction") {
  CHECK_NOTHROW(UnitQuaternion(Quaternion(1.0 + 1e-8, 0, 0, 0)));
  CHECK(UnitQuaternion(Quaternion(1.0 + 1e-8, 0, 0, 0)).quaternion().norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(UnitQuaternion(Quaternion(2.0, 0, 0, 0)), std::invalid_argument);

  // Long products stay unit.
  oracle::Rng rng(18);
  UnitQuaternion r;
  for (int k = 0; k < 10000; ++k) {
    r = r * random_rotation(rng);
  }
  CHECK(std::abs(r.quaternion().norm() - 1.0) <= 1e-9);
}

TEST_CASE("poses") {
  const UnitDualQuaternion identity{UnitQuaternion{}, PureQuaternion{}};
  CHECK(identity.dual_quaternion() == DualQuaternion(Quaternion(1.0)));
  const UnitDualQuaternion shifted(UnitQuaternion(), PureQuaternion(2.0, 0.0, 0.0));
  CHECK(shifted.dual_quaternion() == DualQuaternion(Quaternion(1.0), kI));

  oracle::Rng rng(19);
  for (int k = 0; k < 500; ++k) {
    const UnitQuaternion r = random_rotation(rng);
    const Vector3 t = rng.vec3(0.5);
    const UnitDualQuaternion x = pose_compose(r, PureQuaternion(t));
    const RotationTranslation back = pose_decompose(x);
    CHECK(distance(back.rotation.quaternion(), r.quaternion()) <= 1e-12);
    CHECK((back.translation.vec3() - t).cwiseAbs().maxCoeff() <= 1e-12);

    const DualQuaternion& d = x.dual_quaternion();
    CHECK(std::abs(d.primary.norm() - 1.0) <= 1e-9);
    CHECK(std::abs(d.primary.vec4().dot(d.dual.vec4())) <= 1e-9);
    const DualQuaternion xx = d * d.conj();
    CHECK(distance(xx, DualQuaternion(Quaternion(1.0))) <= 1e-9);

    // Composition equals composing rotations and translations separately.
    const UnitDualQuaternion a = random_pose(rng);
    const UnitDualQuaternion b = random_pose(rng);
    const UnitDualQuaternion ab = a * b;
    const UnitQuaternion ra = a.rotation();
    const Vector3 expected_t = a.translation().vec3() + ra.rotate(b.translation().vec3());
    CHECK((ab.translation().vec3() - expected_t).norm() <= 1e-10);
    CHECK(distance(ab.rotation().quaternion(), (ra * b.rotation()).quaternion()) <= 1e-10);
    CHECK(std::abs(ab.dual_quaternion().primary.norm() - 1.0) <= 1e-9);
  }
}

TEST_CASE("rotation of vectors") {
  const UnitQuaternion r = UnitQuaternion::from_axis_angle(Vector3::UnitZ(), M_PI / 2);
  CHECK((r.rotate(Vector3::UnitX()) - Vector3::UnitY()).norm() <= 1e-15);
  CHECK((skew(Vector3(1, 2, 3)) * Vector3(-1, 0, 2) - Vector3(1, 2, 3).cross(Vector3(-1, 0, 2))).norm() == 0.0);
}
