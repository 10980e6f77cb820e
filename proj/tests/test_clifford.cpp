#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "core/bell.hpp"
#include "core/clifford.hpp"
#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/vec.hpp"
#include "support/cayley_reference.hpp"

using namespace bellsim;

namespace {

Multivector random_multivector(SeededStream& rng) {
  Multivector m;
  for (std::size_t i = 0; i < 8; ++i) m[i] = 2.0 * rng.next_unit() - 1.0;
  return m;
}

double max_abs(const std::array<double, 8>& a, const Multivector& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < 8; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

Vec3 sandwich_rotate(const Quaternion& rotor, const Vec3& v) {
  const Multivector image = rotor.to_multivector() * Multivector::vector(v) *
                            rotor.reversed().to_multivector();
  return image.vector_part();
}

}  // namespace

TEST_CASE("basis products match the independent table") {
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      const Multivector got = Multivector::basis(i) * Multivector::basis(j);
      std::array<double, 8> ei{};
      std::array<double, 8> ej{};
      ei[i] = 1.0;
      ej[j] = 1.0;
      const auto want = cayley_reference::product(ei, ej);
      for (std::size_t k = 0; k < 8; ++k) {
        INFO("i=", i, " j=", j, " k=", k);
        CHECK(got[k] == want[k]);
      }
    }
  }
}

TEST_CASE("random products match the independent table") {
  SeededStream rng(0x5eed01);
  for (int rep = 0; rep < 2000; ++rep) {
    const Multivector a = random_multivector(rng);
    const Multivector b = random_multivector(rng);
    const auto want = cayley_reference::product(a.coefficients(), b.coefficients());
    CHECK(max_abs(want, a * b) <= 1e-13);
  }
}

TEST_CASE("worked example: (e_x + e_y) e_x") {
  const Multivector v = Multivector::vector(Vec3{1.0, 1.0, 0.0});
  const Multivector got = v * Multivector::basis(kEX);
  CHECK(got[kScalar] == 1.0);
  CHECK(got[kEXY] == -1.0);
  for (const std::size_t k : {kEX, kEY, kEZ, kEYZ, kEZX, kI}) CHECK(got[k] == 0.0);
}

TEST_CASE("reversion") {
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(Multivector::basis(i).reverse()[i] == cayley_reference::reversion_sign(i));
  }
  SeededStream rng(0x5eed02);
  for (int rep = 0; rep < 500; ++rep) {
    const Multivector a = random_multivector(rng);
    const Multivector b = random_multivector(rng);
    CHECK(max_abs_difference((a * b).reverse(), b.reverse() * a.reverse()) <= 1e-13);
  }
}

TEST_CASE("grade projections decompose the element") {
  SeededStream rng(0x5eed03);
  const Multivector m = random_multivector(rng);
  const Multivector sum = m.grade(0) + m.grade(1) + m.grade(2) + m.grade(3);
  CHECK(max_abs_difference(sum, m) == 0.0);
  CHECK(m.grade(0)[kScalar] == m[kScalar]);
  CHECK(m.grade(1)[kEX] == m[kEX]);
  CHECK(m.grade(2)[kEYZ] == m[kEYZ]);
  CHECK(m.grade(3)[kI] == m[kI]);
  CHECK(m.grade(1)[kScalar] == 0.0);
  CHECK(m.grade(2)[kI] == 0.0);
}

TEST_CASE("norm squares to the scalar part of m times its reverse") {
  SeededStream rng(0x5eed04);
  for (int rep = 0; rep < 500; ++rep) {
    const Multivector m = random_multivector(rng);
    CHECK(std::abs(m.norm() * m.norm() - (m * m.reverse()).scalar_part()) <= 1e-12);
  }
}

TEST_CASE("duality against the pseudoscalar product") {
  CHECK(max_abs_difference(dual(UnitVector::x_axis(), 1),
                           Multivector::basis(kEYZ)) == 0.0);
  CHECK(max_abs_difference(dual(UnitVector::y_axis(), 1),
                           Multivector::basis(kEZX)) == 0.0);
  CHECK(max_abs_difference(dual(UnitVector::z_axis(), 1),
                           Multivector::basis(kEXY)) == 0.0);
  CHECK(dual(UnitVector::z_axis(), -1)[kEXY] == -1.0);

  SeededStream rng(0x5eed05);
  for (int rep = 0; rep < 500; ++rep) {
    const UnitVector n = sample_isotropic(rng);
    for (const int s : {1, -1}) {
      const Multivector beable = dual(n, s);
      const Multivector via_product = static_cast<double>(s) *
                                      (Multivector::pseudoscalar() * Multivector::vector(n));
      CHECK(max_abs_difference(beable, via_product) == 0.0);
      CHECK(max_abs_difference(beable * beable, Multivector::scalar(-1.0)) <= 1e-15);
    }
  }

  const UnitVector diag = UnitVector::from_unnormalized(Vec3{1.0, 1.0, 1.0});
  CHECK(max_abs_difference(dual(diag, 1) * dual(diag, 1), Multivector::scalar(-1.0)) <= 1e-15);

  CHECK_THROWS_AS(dual(UnitVector::z_axis(), 0), DomainError);
  CHECK_THROWS_AS(dual(UnitVector::z_axis(), 2), DomainError);
}

TEST_CASE("quaternion embedding round trip and product") {
  SeededStream rng(0x5eed06);
  for (int rep = 0; rep < 2000; ++rep) {
    const Quaternion p{2.0 * rng.next_unit() - 1.0, 2.0 * rng.next_unit() - 1.0,
                       2.0 * rng.next_unit() - 1.0, 2.0 * rng.next_unit() - 1.0};
    const Quaternion q{2.0 * rng.next_unit() - 1.0, 2.0 * rng.next_unit() - 1.0,
                       2.0 * rng.next_unit() - 1.0, 2.0 * rng.next_unit() - 1.0};

    const Quaternion round = Quaternion::from_even(p.to_multivector());
    CHECK(round.w == p.w);
    CHECK(round.x == p.x);
    CHECK(round.y == p.y);
    CHECK(round.z == p.z);

    // In this basis the dual-bivector units obey u_a u_b = -delta_ab -
    // eps_abc u_c, so the closed form carries a minus cross product.
    const Quaternion got = quaternion_product(p, q);
    const Vec3 pv{p.x, p.y, p.z};
    const Vec3 qv{q.x, q.y, q.z};
    const Vec3 want_v = p.w * qv + q.w * pv - cross(pv, qv);
    CHECK(std::abs(got.w - (p.w * q.w - dot(pv, qv))) <= 1e-13);
    CHECK(std::abs(got.x - want_v.x) <= 1e-13);
    CHECK(std::abs(got.y - want_v.y) <= 1e-13);
    CHECK(std::abs(got.z - want_v.z) <= 1e-13);

    CHECK(std::abs(quaternion_norm(got) - quaternion_norm(p) * quaternion_norm(q)) <= 1e-12);

    const Quaternion rev = Quaternion::from_even(p.to_multivector().reverse());
    CHECK(rev.w == p.reversed().w);
    CHECK(rev.x == p.reversed().x);
    CHECK(rev.y == p.reversed().y);
    CHECK(rev.z == p.reversed().z);
  }
}

TEST_CASE("bivector product closed form") {
  SeededStream rng(0x5eed07);
  for (int rep = 0; rep < 1000; ++rep) {
    const UnitVector a = sample_isotropic(rng);
    const UnitVector b = sample_isotropic(rng);
    for (const int s : {1, -1}) {
      const Quaternion got = bivector_product(a, b, s);
      const Vec3 axis = static_cast<double>(-s) * cross(a, b);
      CHECK(std::abs(got.w - (-dot(a, b))) <= 1e-15);
      CHECK(std::abs(got.x - axis.x) <= 1e-15);
      CHECK(std::abs(got.y - axis.y) <= 1e-15);
      CHECK(std::abs(got.z - axis.z) <= 1e-15);
      CHECK(std::abs(quaternion_norm(got) - 1.0) <= 1e-14);
    }
  }
}

TEST_CASE("rotors rotate vectors") {
  const Quaternion quarter = rotor_about(UnitVector::z_axis(), kPi / 2.0);
  const Vec3 image = sandwich_rotate(quarter, Vec3{1.0, 0.0, 0.0});
  CHECK(std::abs(image.x) <= 1e-15);
  CHECK(std::abs(image.y - 1.0) <= 1e-15);
  CHECK(std::abs(image.z) <= 1e-15);

  SeededStream rng(0x5eed08);
  for (int rep = 0; rep < 500; ++rep) {
    const UnitVector axis = sample_isotropic(rng);
    const double angle = (2.0 * rng.next_unit() - 1.0) * 2.0 * kPi;
    const UnitVector v = sample_isotropic(rng);

    const Vec3 got = sandwich_rotate(rotor_about(axis, angle), v.vec());
    const Vec3 k = axis.vec();
    const Vec3 want = std::cos(angle) * v.vec() + std::sin(angle) * cross(k, v.vec()) +
                      (dot(k, v.vec()) * (1.0 - std::cos(angle))) * k;
    CHECK(std::abs(got.x - want.x) <= 1e-12);
    CHECK(std::abs(got.y - want.y) <= 1e-12);
    CHECK(std::abs(got.z - want.z) <= 1e-12);
  }
}

TEST_CASE("fiber rotor") {
  const Quaternion f = fiber_rotor(0.3);
  CHECK(f.w == std::cos(0.3));
  CHECK(f.x == 0.0);
  CHECK(f.y == 0.0);
  CHECK(f.z == std::sin(0.3));
  CHECK(std::abs(quaternion_norm(f) - 1.0) <= 1e-15);

  const Quaternion id = fiber_rotor(0.0);
  CHECK(id.w == 1.0);
  CHECK(id.z == 0.0);
}

TEST_CASE("hopf map hits the poles") {
  const UnitVector north = hopf_map(Quaternion{1.0, 0.0, 0.0, 0.0});
  CHECK(north.x() == 0.0);
  CHECK(north.y() == 0.0);
  CHECK(north.z() == 1.0);

  CHECK(hopf_map(Quaternion{0.0, 1.0, 0.0, 0.0}).z() == -1.0);
  CHECK(hopf_map(Quaternion{0.0, 0.0, 1.0, 0.0}).z() == -1.0);
  CHECK(hopf_map(Quaternion{0.0, 0.0, 0.0, 1.0}).z() == 1.0);
}

TEST_CASE("hopf map matches the reference sandwich") {
  SeededStream rng(0x5eed09);
  std::array<double, 8> pole{};
  pole[kEZ] = 1.0;
  for (int rep = 0; rep < 500; ++rep) {
    const auto [g0, g1] = rng.next_normal_pair();
    const auto [g2, g3] = rng.next_normal_pair();
    const double n = std::sqrt(g0 * g0 + g1 * g1 + g2 * g2 + g3 * g3);
    if (n < 1e-6) continue;
    const Quaternion q{g0 / n, g1 / n, g2 / n, g3 / n};

    const UnitVector got = hopf_map(q);
    const auto q_arr = q.to_multivector().coefficients();
    const auto image = cayley_reference::product(cayley_reference::product(q_arr, pole),
                                                 cayley_reference::reverse(q_arr));
    CHECK(std::abs(got.x() - image[kEX]) <= 1e-12);
    CHECK(std::abs(got.y() - image[kEY]) <= 1e-12);
    CHECK(std::abs(got.z() - image[kEZ]) <= 1e-12);
    CHECK(std::abs(image[kScalar]) <= 1e-12);
    CHECK(std::abs(image[kI]) <= 1e-12);
  }
}

TEST_CASE("hopf map is constant along fibers") {
  SeededStream rng(0x5eed0a);
  for (int rep = 0; rep < 500; ++rep) {
    const auto [g0, g1] = rng.next_normal_pair();
    const auto [g2, g3] = rng.next_normal_pair();
    const double n = std::sqrt(g0 * g0 + g1 * g1 + g2 * g2 + g3 * g3);
    if (n < 1e-6) continue;
    const Quaternion q{g0 / n, g1 / n, g2 / n, g3 / n};
    const double t = (2.0 * rng.next_unit() - 1.0) * kPi;

    const UnitVector base = hopf_map(q);
    const UnitVector moved = hopf_map(quaternion_product(q, fiber_rotor(t)));
    CHECK(std::abs(base.x() - moved.x()) <= 1e-12);
    CHECK(std::abs(base.y() - moved.y()) <= 1e-12);
    CHECK(std::abs(base.z() - moved.z()) <= 1e-12);
  }
}

TEST_CASE("hopf map validates the norm") {
  CHECK_THROWS_AS(hopf_map(Quaternion{2.0, 0.0, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(hopf_map(Quaternion{0.5, 0.5, 0.0, 0.0}), DomainError);
  CHECK_NOTHROW(hopf_map(Quaternion{1.0 + 1e-10, 0.0, 0.0, 0.0}));
}
