#include "vfix/quaternion.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace vfix {

double Quaternion::norm() const { return std::sqrt(squared_norm()); }

Quaternion& Quaternion::operator+=(const Quaternion& o) {
  w += o.w;
  x += o.x;
  y += o.y;
  z += o.z;
  return *this;
}

Quaternion& Quaternion::operator-=(const Quaternion& o) {
  w -= o.w;
  x -= o.x;
  y -= o.y;
  z -= o.z;
  return *this;
}

Quaternion& Quaternion::operator*=(double s) {
  w *= s;
  x *= s;
  y *= s;
  z *= s;
  return *this;
}

Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
Quaternion operator-(const Quaternion& a) { return {-a.w, -a.x, -a.y, -a.z}; }
Quaternion operator*(Quaternion a, double s) { return a *= s; }
Quaternion operator*(double s, Quaternion a) { return a *= s; }

Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

bool operator==(const Quaternion& a, const Quaternion& b) {
  return a.w == b.w && a.x == b.x && a.y == b.y && a.z == b.z;
}

std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << q.w << " + " << q.x << "i + " << q.y << "j + " << q.z << "k";
}

bool is_pure(const Quaternion& h, double tol) { return std::abs(h.w) <= tol; }

Vector3 vec3(const Quaternion& p) {
  if (!is_pure(p)) {
    throw std::invalid_argument("vec3: quaternion has nonzero real part " + std::to_string(p.w));
  }
  return p.imag();
}

// Unit quaternion

UnitQuaternion::UnitQuaternion(const Quaternion& q) : q_(q) {
  const double n = q.norm();
  const double drift = std::abs(n - 1.0);
  if (drift > kUnitRepairTolerance || !std::isfinite(n)) {
    throw std::invalid_argument("UnitQuaternion: norm " + std::to_string(n) + " is not 1");
  }
  if (drift > kUnitDriftTolerance) {
    q_ *= 1.0 / n;
  }
}

UnitQuaternion UnitQuaternion::from_axis_angle(const Vector3& axis, double angle) {
  const double n = axis.norm();
  if (n == 0.0) {
    throw std::invalid_argument("UnitQuaternion::from_axis_angle: zero axis");
  }
  const Vector3 v = axis / n * std::sin(0.5 * angle);
  return UnitQuaternion(Quaternion{std::cos(0.5 * angle), v[0], v[1], v[2]});
}

UnitQuaternion UnitQuaternion::conj() const { return UnitQuaternion(q_.conj()); }

Vector3 UnitQuaternion::rotate(const Vector3& p) const {
  return (q_ * Quaternion::pure(p) * q_.conj()).imag();
}

UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b) {
  return UnitQuaternion(a.quaternion() * b.quaternion());
}

// Dual quaternion

DualQuaternion DualQuaternion::from_vec8(const Vector8& v) {
  return {Quaternion{v[0], v[1], v[2], v[3]}, Quaternion{v[4], v[5], v[6], v[7]}};
}

Vector8 DualQuaternion::vec8() const {
  Vector8 v;
  v << primary.w, primary.x, primary.y, primary.z, dual.w, dual.x, dual.y, dual.z;
  return v;
}

DualQuaternion& DualQuaternion::operator+=(const DualQuaternion& o) {
  primary += o.primary;
  dual += o.dual;
  return *this;
}

DualQuaternion& DualQuaternion::operator-=(const DualQuaternion& o) {
  primary -= o.primary;
  dual -= o.dual;
  return *this;
}

DualQuaternion operator+(DualQuaternion a, const DualQuaternion& b) { return a += b; }
DualQuaternion operator-(DualQuaternion a, const DualQuaternion& b) { return a -= b; }
DualQuaternion operator*(DualQuaternion a, double s) { return {a.primary * s, a.dual * s}; }
DualQuaternion operator*(double s, DualQuaternion a) { return {a.primary * s, a.dual * s}; }

DualQuaternion operator*(const DualQuaternion& a, const DualQuaternion& b) {
  return {a.primary * b.primary, a.primary * b.dual + a.dual * b.primary};
}

bool operator==(const DualQuaternion& a, const DualQuaternion& b) {
  return a.primary == b.primary && a.dual == b.dual;
}

std::ostream& operator<<(std::ostream& os, const DualQuaternion& q) {
  return os << "(" << q.primary << ") + E(" << q.dual << ")";
}

bool is_pure(const DualQuaternion& h, double tol) { return is_pure(h.primary, tol) && is_pure(h.dual, tol); }

// Unit dual quaternion

UnitDualQuaternion::UnitDualQuaternion(const DualQuaternion& x) : x_(x) {
  const double n = x.primary.norm();
  const double drift = std::abs(n - 1.0);
  if (drift > kUnitRepairTolerance || !std::isfinite(n)) {
    throw std::invalid_argument("UnitDualQuaternion: primary norm " + std::to_string(n) + " is not 1");
  }
  const double inner = x.primary.vec4().dot(x.dual.vec4());
  if (std::abs(inner) > kUnitRepairTolerance) {
    throw std::invalid_argument("UnitDualQuaternion: primary and dual parts are not orthogonal (" +
                                std::to_string(inner) + ")");
  }
  if (drift > kUnitDriftTolerance || std::abs(inner) > kUnitDriftTolerance) {
    const Vector4 p = x.primary.vec4() / n;
    Vector4 d = x.dual.vec4() / n;
    d -= p * p.dot(d);
    x_ = {Quaternion::from_vec4(p), Quaternion::from_vec4(d)};
  }
}

UnitDualQuaternion::UnitDualQuaternion(const UnitQuaternion& r, const PureQuaternion& t)
    : x_{r.quaternion(), 0.5 * (t.quaternion() * r.quaternion())} {}

UnitDualQuaternion UnitDualQuaternion::from_translation(const Vector3& t) {
  return {UnitQuaternion{}, PureQuaternion(t)};
}

UnitDualQuaternion UnitDualQuaternion::from_rotation(const UnitQuaternion& r) { return {r, PureQuaternion{}}; }

UnitQuaternion UnitDualQuaternion::rotation() const { return UnitQuaternion(x_.primary); }

PureQuaternion UnitDualQuaternion::translation() const {
  const Quaternion t = 2.0 * (x_.dual * x_.primary.conj());
  return PureQuaternion(t.imag());
}

UnitDualQuaternion UnitDualQuaternion::conj() const { return UnitDualQuaternion(x_.conj()); }

UnitDualQuaternion operator*(const UnitDualQuaternion& a, const UnitDualQuaternion& b) {
  return UnitDualQuaternion(a.dual_quaternion() * b.dual_quaternion());
}

RotationTranslation pose_decompose(const UnitDualQuaternion& x) { return {x.rotation(), x.translation()}; }

// Hamilton operators

Matrix4 hamilton_plus(const Quaternion& a) {
  Matrix4 m;
  m << a.w, -a.x, -a.y, -a.z,
       a.x,  a.w, -a.z,  a.y,
       a.y,  a.z,  a.w, -a.x,
       a.z, -a.y,  a.x,  a.w;
  return m;
}

Matrix4 hamilton_minus(const Quaternion& b) {
  Matrix4 m;
  m << b.w, -b.x, -b.y, -b.z,
       b.x,  b.w,  b.z, -b.y,
       b.y, -b.z,  b.w,  b.x,
       b.z,  b.y, -b.x,  b.w;
  return m;
}

Matrix8 hamilton_plus(const DualQuaternion& a) {
  Matrix8 m = Matrix8::Zero();
  const Matrix4 p = hamilton_plus(a.primary);
  m.topLeftCorner<4, 4>() = p;
  m.bottomRightCorner<4, 4>() = p;
  m.bottomLeftCorner<4, 4>() = hamilton_plus(a.dual);
  return m;
}

Matrix8 hamilton_minus(const DualQuaternion& b) {
  Matrix8 m = Matrix8::Zero();
  const Matrix4 p = hamilton_minus(b.primary);
  m.topLeftCorner<4, 4>() = p;
  m.bottomRightCorner<4, 4>() = p;
  m.bottomLeftCorner<4, 4>() = hamilton_minus(b.dual);
  return m;
}

Matrix4 conjugation_matrix4() { return Vector4(1.0, -1.0, -1.0, -1.0).asDiagonal(); }

// Pure inner and cross products

namespace {

void require_pure(const Quaternion& a, const char* what) {
  if (!is_pure(a)) {
    throw std::invalid_argument(std::string(what) + ": argument is not a pure quaternion");
  }
}

void require_pure(const DualQuaternion& a, const char* what) {
  if (!is_pure(a)) {
    throw std::invalid_argument(std::string(what) + ": argument is not a pure dual quaternion");
  }
}

}  // namespace

double pure_inner(const Quaternion& a, const Quaternion& b) {
  require_pure(a, "pure_inner");
  require_pure(b, "pure_inner");
  return (-0.5 * (a * b + b * a)).w;
}

DualQuaternion pure_inner(const DualQuaternion& a, const DualQuaternion& b) {
  require_pure(a, "pure_inner");
  require_pure(b, "pure_inner");
  return -0.5 * (a * b + b * a);
}

Quaternion pure_cross(const Quaternion& a, const Quaternion& b) {
  require_pure(a, "pure_cross");
  require_pure(b, "pure_cross");
  return 0.5 * (a * b - b * a);
}

DualQuaternion pure_cross(const DualQuaternion& a, const DualQuaternion& b) {
  require_pure(a, "pure_cross");
  require_pure(b, "pure_cross");
  return 0.5 * (a * b - b * a);
}

Matrix3 skew(const Vector3& a) {
  Matrix3 m;
  m << 0.0, -a[2], a[1],
       a[2], 0.0, -a[0],
       -a[1], a[0], 0.0;
  return m;
}

}  // namespace vfix
