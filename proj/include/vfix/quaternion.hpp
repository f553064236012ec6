#pragma once

#include <Eigen/Dense>

#include <iosfwd>

namespace vfix {

using Vector3 = Eigen::Vector3d;
using Vector4 = Eigen::Vector4d;
using Vector8 = Eigen::Matrix<double, 8, 1>;
using Matrix3 = Eigen::Matrix3d;
using Matrix4 = Eigen::Matrix4d;
using Matrix8 = Eigen::Matrix<double, 8, 8>;

/// Quaternion h = w + x î + y ĵ + z k̂, stored in (w, x, y, z) order.
struct Quaternion {
  double w{0.0};
  double x{0.0};
  double y{0.0};
  double z{0.0};

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}
  constexpr explicit Quaternion(double real) : w(real) {}

  static Quaternion from_vec4(const Vector4& v) { return {v[0], v[1], v[2], v[3]}; }
  static Quaternion pure(const Vector3& v) { return {0.0, v[0], v[1], v[2]}; }

  Vector4 vec4() const { return {w, x, y, z}; }
  /// Imaginary part. Use vfix::vec3() when the input must be pure.
  Vector3 imag() const { return {x, y, z}; }

  Quaternion conj() const { return {w, -x, -y, -z}; }
  double squared_norm() const { return w * w + x * x + y * y + z * z; }
  double norm() const;

  Quaternion& operator+=(const Quaternion& o);
  Quaternion& operator-=(const Quaternion& o);
  Quaternion& operator*=(double s);
};

Quaternion operator+(Quaternion a, const Quaternion& b);
Quaternion operator-(Quaternion a, const Quaternion& b);
Quaternion operator-(const Quaternion& a);
Quaternion operator*(Quaternion a, double s);
Quaternion operator*(double s, Quaternion a);
/// Hamilton product.
Quaternion operator*(const Quaternion& a, const Quaternion& b);
bool operator==(const Quaternion& a, const Quaternion& b);
std::ostream& operator<<(std::ostream& os, const Quaternion& q);

inline constexpr Quaternion kI{0.0, 1.0, 0.0, 0.0};
inline constexpr Quaternion kJ{0.0, 0.0, 1.0, 0.0};
inline constexpr Quaternion kK{0.0, 0.0, 0.0, 1.0};

inline Quaternion quat_mul(const Quaternion& a, const Quaternion& b) { return a * b; }
inline Quaternion quat_conj(const Quaternion& h) { return h.conj(); }

/// Tolerance on the real part below which a quaternion is accepted as pure.
inline constexpr double kPureTolerance = 1e-9;

bool is_pure(const Quaternion& h, double tol = kPureTolerance);

/// vec₃: pure quaternion to ℝ³. Throws std::invalid_argument on a non-pure input.
Vector3 vec3(const Quaternion& p);
inline Vector4 vec4(const Quaternion& h) { return h.vec4(); }

/// A quaternion with zero real part; a point or free vector in ℝ³.
class PureQuaternion {
 public:
  PureQuaternion() = default;
  PureQuaternion(double x, double y, double z) : v_(x, y, z) {}
  explicit PureQuaternion(const Vector3& v) : v_(v) {}
  /// Throws std::invalid_argument when Re(h) is not zero.
  static PureQuaternion from(const Quaternion& h) { return PureQuaternion(::vfix::vec3(h)); }

  const Vector3& vec3() const { return v_; }
  Quaternion quaternion() const { return Quaternion::pure(v_); }
  operator Quaternion() const { return quaternion(); }  // NOLINT(google-explicit-constructor)
  double norm() const { return v_.norm(); }

 private:
  Vector3 v_{Vector3::Zero()};
};

/// Unit-norm quaternion r = cos(φ/2) + v sin(φ/2).
class UnitQuaternion {
 public:
  /// Identity rotation.
  UnitQuaternion() = default;

  /// Renormalizes drift up to kUnitRepairTolerance, throws std::invalid_argument beyond it.
  explicit UnitQuaternion(const Quaternion& q);

  static UnitQuaternion from_axis_angle(const Vector3& axis, double angle);

  const Quaternion& quaternion() const { return q_; }
  operator const Quaternion&() const { return q_; }  // NOLINT(google-explicit-constructor)
  UnitQuaternion conj() const;
  Vector4 vec4() const { return q_.vec4(); }
  /// r p r* for a vector p.
  Vector3 rotate(const Vector3& p) const;

 private:
  Quaternion q_{1.0, 0.0, 0.0, 0.0};
};

UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b);

/// Unit-norm drift below this is left alone.
inline constexpr double kUnitDriftTolerance = 1e-9;
/// Drift between the two tolerances is renormalized; larger deviations are construction errors.
inline constexpr double kUnitRepairTolerance = 1e-6;

/// Dual quaternion h + ε h′ with ε² = 0, stored as (primary, dual).
struct DualQuaternion {
  Quaternion primary{};
  Quaternion dual{};

  constexpr DualQuaternion() = default;
  constexpr DualQuaternion(const Quaternion& p, const Quaternion& d) : primary(p), dual(d) {}
  constexpr explicit DualQuaternion(const Quaternion& p) : primary(p) {}

  static DualQuaternion from_vec8(const Vector8& v);
  Vector8 vec8() const;
  DualQuaternion conj() const { return {primary.conj(), dual.conj()}; }

  DualQuaternion& operator+=(const DualQuaternion& o);
  DualQuaternion& operator-=(const DualQuaternion& o);
};

DualQuaternion operator+(DualQuaternion a, const DualQuaternion& b);
DualQuaternion operator-(DualQuaternion a, const DualQuaternion& b);
DualQuaternion operator*(DualQuaternion a, double s);
DualQuaternion operator*(double s, DualQuaternion a);
DualQuaternion operator*(const DualQuaternion& a, const DualQuaternion& b);
bool operator==(const DualQuaternion& a, const DualQuaternion& b);
std::ostream& operator<<(std::ostream& os, const DualQuaternion& q);

inline DualQuaternion dq_mul(const DualQuaternion& a, const DualQuaternion& b) { return a * b; }
inline DualQuaternion dq_conj(const DualQuaternion& x) { return x.conj(); }
inline Vector8 vec8(const DualQuaternion& h) { return h.vec8(); }

bool is_pure(const DualQuaternion& h, double tol = kPureTolerance);

/// Rigid pose x = r + ε ½ t r.
class UnitDualQuaternion {
 public:
  UnitDualQuaternion() = default;
  /// Validates ‖primary‖ = 1 and ⟨primary, dual⟩ = 0, repairing small drift.
  explicit UnitDualQuaternion(const DualQuaternion& x);
  UnitDualQuaternion(const UnitQuaternion& r, const PureQuaternion& t);

  static UnitDualQuaternion from_translation(const Vector3& t);
  static UnitDualQuaternion from_rotation(const UnitQuaternion& r);

  const DualQuaternion& dual_quaternion() const { return x_; }
  operator const DualQuaternion&() const { return x_; }  // NOLINT(google-explicit-constructor)

  UnitQuaternion rotation() const;
  /// t = 2 h′ h*.
  PureQuaternion translation() const;
  UnitDualQuaternion conj() const;
  Vector8 vec8() const { return x_.vec8(); }

 private:
  DualQuaternion x_{Quaternion{1.0, 0.0, 0.0, 0.0}, Quaternion{}};
};

UnitDualQuaternion operator*(const UnitDualQuaternion& a, const UnitDualQuaternion& b);

inline UnitDualQuaternion pose_compose(const UnitQuaternion& r, const PureQuaternion& t) { return {r, t}; }

struct RotationTranslation {
  UnitQuaternion rotation;
  PureQuaternion translation;
};
RotationTranslation pose_decompose(const UnitDualQuaternion& x);

/// H⁺₄(a): vec₄(a b) = H⁺₄(a) vec₄(b).
Matrix4 hamilton_plus(const Quaternion& a);
/// H⁻₄(b): vec₄(a b) = H⁻₄(b) vec₄(a).
Matrix4 hamilton_minus(const Quaternion& b);
Matrix8 hamilton_plus(const DualQuaternion& a);
Matrix8 hamilton_minus(const DualQuaternion& b);

/// C₄ = diag(1, -1, -1, -1), so vec₄(h*) = C₄ vec₄(h).
Matrix4 conjugation_matrix4();

/// ⟨a, b⟩ = -½(ab + ba); pure inputs only. Real for quaternions, a dual number for dual quaternions.
double pure_inner(const Quaternion& a, const Quaternion& b);
DualQuaternion pure_inner(const DualQuaternion& a, const DualQuaternion& b);
/// a × b = ½(ab − ba); pure inputs only.
Quaternion pure_cross(const Quaternion& a, const Quaternion& b);
DualQuaternion pure_cross(const DualQuaternion& a, const DualQuaternion& b);

/// Skew matrix with skew(a) b = a × b.
Matrix3 skew(const Vector3& a);

}  // namespace vfix
