#pragma once

#include <array>
#include <cstddef>

#include "core/vec.hpp"

namespace bellsim {

// Dense element of Cl(3,0) with e_i e_i = +1. Coefficients are stored in the
// fixed basis order
//   index 0..7: 1, e_x, e_y, e_z, e_x^e_y, e_y^e_z, e_z^e_x, I
// with I = e_x e_y e_z, so I e_x = e_y^e_z and cyclically.
enum BasisIndex : std::size_t {
  kScalar = 0,
  kEX = 1,
  kEY = 2,
  kEZ = 3,
  kEXY = 4,
  kEYZ = 5,
  kEZX = 6,
  kI = 7,
};

class Multivector {
 public:
  Multivector() : c_{} {}
  explicit Multivector(const std::array<double, 8>& c) : c_(c) {}

  static Multivector scalar(double v) {
    Multivector m;
    m.c_[kScalar] = v;
    return m;
  }
  static Multivector vector(const Vec3& v) {
    Multivector m;
    m.c_[kEX] = v.x;
    m.c_[kEY] = v.y;
    m.c_[kEZ] = v.z;
    return m;
  }
  static Multivector vector(const UnitVector& v) { return vector(v.vec()); }
  static Multivector basis(std::size_t index) {
    Multivector m;
    m.c_[index] = 1.0;
    return m;
  }
  static Multivector pseudoscalar() { return basis(kI); }

  double operator[](std::size_t i) const { return c_[i]; }
  double& operator[](std::size_t i) { return c_[i]; }
  const std::array<double, 8>& coefficients() const { return c_; }

  double scalar_part() const { return c_[kScalar]; }
  Vec3 vector_part() const { return {c_[kEX], c_[kEY], c_[kEZ]}; }

  // Bivector coefficients in duality order: (e_y^e_z, e_z^e_x, e_x^e_y),
  // i.e. the components of the vector n with bivector = I n.
  std::array<double, 3> bivector_dual_components() const {
    return {c_[kEYZ], c_[kEZX], c_[kEXY]};
  }

  Multivector grade(int k) const;

  // Reversion: + + - - signs on grades 0..3.
  Multivector reverse() const;

  double norm() const;

  Multivector& operator+=(const Multivector& o);
  Multivector& operator-=(const Multivector& o);
  Multivector& operator*=(double s);

 private:
  std::array<double, 8> c_;
};

Multivector operator+(Multivector a, const Multivector& b);
Multivector operator-(Multivector a, const Multivector& b);
Multivector operator*(double s, Multivector a);

// Full geometric product, hand-unrolled for the fixed basis order above.
Multivector geometric_product(const Multivector& a, const Multivector& b);
inline Multivector operator*(const Multivector& a, const Multivector& b) {
  return geometric_product(a, b);
}

double max_abs_difference(const Multivector& a, const Multivector& b);
bool approx_equal(const Multivector& a, const Multivector& b, double tol);

// Grade-2 dual of a direction for orientation sign s = +-1:
// dual(n, s) = s I n, a unit bivector (squares to -1).
Multivector dual(const UnitVector& n, int orientation_sign);

// Even-subalgebra element written as w + x (I e_x) + y (I e_y) + z (I e_z).
// The duality-basis coefficients (x, y, z) transform like a quaternion's
// imaginary part; w is the scalar part.
struct Quaternion {
  double w = 0.0, x = 0.0, y = 0.0, z = 0.0;

  Multivector to_multivector() const {
    Multivector m;
    m[kScalar] = w;
    m[kEYZ] = x;
    m[kEZX] = y;
    m[kEXY] = z;
    return m;
  }
  static Quaternion from_even(const Multivector& m) {
    return {m[kScalar], m[kEYZ], m[kEZX], m[kEXY]};
  }

  Quaternion reversed() const { return {w, -x, -y, -z}; }
};

double quaternion_norm(const Quaternion& q);
Quaternion quaternion_product(const Quaternion& a, const Quaternion& b);

// Product of the two orientation bivectors (s I a)(s I b), with the bivector
// coefficients read in the orientation-adapted basis {s I e_x, s I e_y,
// s I e_z}. In that basis the closed form is (-a.b, -s (a x b)): the scalar
// part ignores the orientation while the bivector coefficients flip with it.
// (In the fixed basis the raw product equals -ab for either sign; the
// adapted readout is what downstream orientation averaging consumes.)
Quaternion bivector_product(const UnitVector& a, const UnitVector& b,
                            int orientation_sign);

// Rotor cos(angle/2) - sin(angle/2) I axis; sandwiching with it rotates
// vectors by `angle` about `axis`.
Quaternion rotor_about(const UnitVector& axis, double angle);

// Rotor about e_z, exp(t e_x^e_y); right-multiplication by it moves a point
// of S^3 along the fiber over hopf_map(q).
Quaternion fiber_rotor(double t);

// Hopf projection S^3 -> S^2 with base point e_z: the grade-1 part of
// q e_z q~. Requires |q| = 1 within 1e-9 (renormalized before use);
// anything further off is a domain error.
UnitVector hopf_map(const Quaternion& q);

}  // namespace bellsim
