#pragma once

#include <array>
#include <cmath>

#include "core/error.hpp"

namespace bellsim {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
inline Vec3 operator-(const Vec3& v) { return {-v.x, -v.y, -v.z}; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

// Direction on S^2. Constructors accept a norm within 1e-9 of 1 and
// renormalize; anything further off is a domain error. Use from_unnormalized
// for raw sample vectors of arbitrary (nonzero) length.
class UnitVector {
 public:
  UnitVector(double x, double y, double z) : v_{x, y, z} {
    const double n = norm(v_);
    if (std::abs(n - 1.0) > 1e-9)
      throw DomainError("UnitVector: norm deviates from 1 by more than 1e-9");
    renormalize(n);
  }

  static UnitVector from_unnormalized(const Vec3& v) {
    const double n = norm(v);
    if (n == 0.0 || !std::isfinite(n))
      throw DomainError("UnitVector: cannot normalize zero or non-finite vector");
    return UnitVector(v, n);
  }

  static UnitVector x_axis() { return UnitVector(Vec3{1.0, 0.0, 0.0}, 1.0); }
  static UnitVector y_axis() { return UnitVector(Vec3{0.0, 1.0, 0.0}, 1.0); }
  static UnitVector z_axis() { return UnitVector(Vec3{0.0, 0.0, 1.0}, 1.0); }

  double x() const { return v_.x; }
  double y() const { return v_.y; }
  double z() const { return v_.z; }
  const Vec3& vec() const { return v_; }

  UnitVector operator-() const { return UnitVector(-v_, 1.0); }

 private:
  UnitVector(const Vec3& v, double n) : v_(v) { renormalize(n); }
  void renormalize(double n) {
    if (n != 1.0) v_ = (1.0 / n) * v_;
  }
  Vec3 v_;
};

inline double dot(const UnitVector& a, const UnitVector& b) { return dot(a.vec(), b.vec()); }
inline double dot(const UnitVector& a, const Vec3& b) { return dot(a.vec(), b); }
inline Vec3 cross(const UnitVector& a, const UnitVector& b) { return cross(a.vec(), b.vec()); }

inline constexpr double kPi = 3.141592653589793238462643383279;

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }

// Canonical coplanar embedding used for angle-parametrized settings: the
// z-x plane, angle measured from e_z toward e_x, so 0 deg is e_z and
// 90 deg is e_x.
inline UnitVector coplanar_direction(double angle_deg) {
  const double t = deg_to_rad(angle_deg);
  return UnitVector::from_unnormalized(Vec3{std::sin(t), 0.0, std::cos(t)});
}

}  // namespace bellsim
