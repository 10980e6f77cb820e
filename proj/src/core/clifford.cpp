#include "core/clifford.hpp"

#include <cmath>

#include "core/error.hpp"

namespace bellsim {

Multivector Multivector::grade(int k) const {
  Multivector m;
  switch (k) {
    case 0:
      m.c_[kScalar] = c_[kScalar];
      break;
    case 1:
      m.c_[kEX] = c_[kEX];
      m.c_[kEY] = c_[kEY];
      m.c_[kEZ] = c_[kEZ];
      break;
    case 2:
      m.c_[kEXY] = c_[kEXY];
      m.c_[kEYZ] = c_[kEYZ];
      m.c_[kEZX] = c_[kEZX];
      break;
    case 3:
      m.c_[kI] = c_[kI];
      break;
    default:
      break;
  }
  return m;
}

Multivector Multivector::reverse() const {
  Multivector m(*this);
  m.c_[kEXY] = -m.c_[kEXY];
  m.c_[kEYZ] = -m.c_[kEYZ];
  m.c_[kEZX] = -m.c_[kEZX];
  m.c_[kI] = -m.c_[kI];
  return m;
}

double Multivector::norm() const {
  double s = 0.0;
  for (double v : c_) s += v * v;
  return std::sqrt(s);
}

Multivector& Multivector::operator+=(const Multivector& o) {
  for (std::size_t i = 0; i < 8; ++i) c_[i] += o.c_[i];
  return *this;
}
Multivector& Multivector::operator-=(const Multivector& o) {
  for (std::size_t i = 0; i < 8; ++i) c_[i] -= o.c_[i];
  return *this;
}
Multivector& Multivector::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
Multivector operator*(double s, Multivector a) { return a *= s; }

Multivector geometric_product(const Multivector& a, const Multivector& b) {
  const double a0 = a[0], a1 = a[1], a2 = a[2], a3 = a[3];
  const double a4 = a[4], a5 = a[5], a6 = a[6], a7 = a[7];
  const double b0 = b[0], b1 = b[1], b2 = b[2], b3 = b[3];
  const double b4 = b[4], b5 = b[5], b6 = b[6], b7 = b[7];

  Multivector c;
  c[kScalar] = a0 * b0 + a1 * b1 + a2 * b2 + a3 * b3 - a4 * b4 - a5 * b5 - a6 * b6 - a7 * b7;
  c[kEX] = a0 * b1 + a1 * b0 - a2 * b4 + a4 * b2 + a3 * b6 - a6 * b3 - a5 * b7 - a7 * b5;
  c[kEY] = a0 * b2 + a2 * b0 + a1 * b4 - a4 * b1 - a3 * b5 + a5 * b3 - a6 * b7 - a7 * b6;
  c[kEZ] = a0 * b3 + a3 * b0 - a1 * b6 + a6 * b1 + a2 * b5 - a5 * b2 - a4 * b7 - a7 * b4;
  c[kEXY] = a0 * b4 + a4 * b0 + a1 * b2 - a2 * b1 - a5 * b6 + a6 * b5 + a3 * b7 + a7 * b3;
  c[kEYZ] = a0 * b5 + a5 * b0 + a2 * b3 - a3 * b2 + a4 * b6 - a6 * b4 + a1 * b7 + a7 * b1;
  c[kEZX] = a0 * b6 + a6 * b0 + a3 * b1 - a1 * b3 - a4 * b5 + a5 * b4 + a2 * b7 + a7 * b2;
  c[kI] = a0 * b7 + a7 * b0 + a1 * b5 + a5 * b1 + a2 * b6 + a6 * b2 + a3 * b4 + a4 * b3;
  return c;
}

double max_abs_difference(const Multivector& a, const Multivector& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    const double d = std::abs(a[i] - b[i]);
    if (d > worst) worst = d;
  }
  return worst;
}

bool approx_equal(const Multivector& a, const Multivector& b, double tol) {
  return max_abs_difference(a, b) <= tol;
}

Multivector dual(const UnitVector& n, int orientation_sign) {
  if (orientation_sign != 1 && orientation_sign != -1)
    throw DomainError("dual: orientation sign must be +1 or -1");
  const double s = static_cast<double>(orientation_sign);
  Multivector m;
  m[kEYZ] = s * n.x();
  m[kEZX] = s * n.y();
  m[kEXY] = s * n.z();
  return m;
}

double quaternion_norm(const Quaternion& q) {
  return std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
}

Quaternion quaternion_product(const Quaternion& a, const Quaternion& b) {
  return Quaternion::from_even(
      geometric_product(a.to_multivector(), b.to_multivector()));
}

Quaternion bivector_product(const UnitVector& a, const UnitVector& b,
                            int orientation_sign) {
  const Multivector raw =
      geometric_product(dual(a, orientation_sign), dual(b, orientation_sign));
  const double s = static_cast<double>(orientation_sign);
  // Coefficient of s I e_k is s times the fixed-basis I e_k coefficient.
  return {raw[kScalar], s * raw[kEYZ], s * raw[kEZX], s * raw[kEXY]};
}

Quaternion rotor_about(const UnitVector& axis, double angle) {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  return {c, -s * axis.x(), -s * axis.y(), -s * axis.z()};
}

Quaternion fiber_rotor(double t) { return {std::cos(t), 0.0, 0.0, std::sin(t)}; }

UnitVector hopf_map(const Quaternion& q) {
  const double n = quaternion_norm(q);
  if (std::abs(n - 1.0) > 1e-9)
    throw DomainError("hopf_map: quaternion norm deviates from 1 by more than 1e-9");
  const double inv = 1.0 / n;
  const Quaternion u{q.w * inv, q.x * inv, q.y * inv, q.z * inv};

  const Multivector m = u.to_multivector();
  const Multivector image =
      geometric_product(geometric_product(m, Multivector::basis(kEZ)),
                        u.reversed().to_multivector());
  return UnitVector::from_unnormalized(image.vector_part());
}

}  // namespace bellsim
