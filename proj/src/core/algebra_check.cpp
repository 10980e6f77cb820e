#include "core/algebra_check.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "core/bell.hpp"
#include "core/rng.hpp"

namespace bellsim {
namespace {

double uniform_signed(SeededStream& stream) { return 2.0 * stream.next_unit() - 1.0; }

Multivector random_multivector(SeededStream& stream) {
  Multivector m;
  for (std::size_t i = 0; i < 8; ++i) {
    m[i] = uniform_signed(stream);
  }
  return m;
}

int random_sign(SeededStream& stream) { return (stream.next_u64() >> 63) ? -1 : 1; }

Quaternion random_unit_quaternion(SeededStream& stream) {
  while (true) {
    const auto [g0, g1] = stream.next_normal_pair();
    const auto [g2, g3] = stream.next_normal_pair();
    const double n = std::sqrt(g0 * g0 + g1 * g1 + g2 * g2 + g3 * g3);
    if (n > 1e-6) {
      return Quaternion{g0 / n, g1 / n, g2 / n, g3 / n};
    }
  }
}

std::string describe_vectors(const char* label_a, const Vec3& a, const char* label_b,
                             const Vec3& b, double deviation) {
  std::ostringstream out;
  out.precision(17);
  out << label_a << "=(" << a.x << ", " << a.y << ", " << a.z << ") " << label_b << "=("
      << b.x << ", " << b.y << ", " << b.z << ") deviation=" << deviation;
  return out.str();
}

std::string describe_deviation(double deviation) {
  std::ostringstream out;
  out.precision(17);
  out << "deviation=" << deviation;
  return out.str();
}

using CaseFn = std::function<std::pair<double, std::string>(SeededStream&, double)>;

AlgebraCheckFamily run_family(std::string name, std::uint64_t cases, std::uint64_t seed,
                              std::uint64_t family_index, double tolerance,
                              const CaseFn& run_case) {
  AlgebraCheckFamily family;
  family.name = std::move(name);
  family.cases = cases;
  SeededStream stream = SeededStream::derive(seed, kStreamChecks, family_index);
  for (std::uint64_t i = 0; i < cases; ++i) {
    auto [deviation, description] = run_case(stream, tolerance);
    family.worst_deviation = std::max(family.worst_deviation, deviation);
    if (deviation > tolerance) {
      ++family.failures;
      if (family.first_failure.empty()) {
        family.first_failure = std::move(description);
      }
    }
  }
  return family;
}

}  // namespace

bool AlgebraCheckReport::passed() const {
  return std::all_of(families.begin(), families.end(),
                     [](const AlgebraCheckFamily& f) { return f.passed(); });
}

std::uint64_t AlgebraCheckReport::total_cases() const {
  std::uint64_t total = 0;
  for (const auto& family : families) total += family.cases;
  return total;
}

std::uint64_t AlgebraCheckReport::total_failures() const {
  std::uint64_t total = 0;
  for (const auto& family : families) total += family.failures;
  return total;
}

double AlgebraCheckReport::worst_deviation() const {
  double worst = 0.0;
  for (const auto& family : families) worst = std::max(worst, family.worst_deviation);
  return worst;
}

AlgebraCheckReport run_algebra_checks(std::uint64_t cases_per_family, std::uint64_t seed,
                                      double tolerance, const AlgebraCheckHooks* hooks) {
  using ProductFn = std::function<Multivector(const Multivector&, const Multivector&)>;
  using DualFn = std::function<Multivector(const UnitVector&, int)>;
  const ProductFn product =
      (hooks && hooks->product_fn)
          ? hooks->product_fn
          : ProductFn([](const Multivector& a, const Multivector& b) { return a * b; });
  const DualFn dual_of = (hooks && hooks->dual_fn)
                             ? hooks->dual_fn
                             : DualFn([](const UnitVector& n, int s) { return dual(n, s); });

  AlgebraCheckReport report;
  report.cases_per_family = cases_per_family;
  report.seed = seed;
  report.tolerance = tolerance;

  report.families.push_back(run_family(
      "vector-anticommutation", cases_per_family, seed, 0, tolerance,
      [&](SeededStream& stream, double tol) {
        const UnitVector u = sample_isotropic(stream);
        const UnitVector v = sample_isotropic(stream);
        const Multivector mu = Multivector::vector(u);
        const Multivector mv = Multivector::vector(v);
        const Multivector lhs = product(mu, mv) + product(mv, mu);
        const Multivector rhs = Multivector::scalar(2.0 * dot(u, v));
        const double deviation = max_abs_difference(lhs, rhs);
        std::string desc;
        if (deviation > tol) desc = describe_vectors("u", u.vec(), "v", v.vec(), deviation);
        return std::make_pair(deviation, std::move(desc));
      }));

  report.families.push_back(run_family(
      "associativity", cases_per_family, seed, 1, tolerance,
      [&](SeededStream& stream, double tol) {
        const Multivector p = random_multivector(stream);
        const Multivector q = random_multivector(stream);
        const Multivector r = random_multivector(stream);
        const double deviation =
            max_abs_difference(product(product(p, q), r), product(p, product(q, r)));
        std::string desc;
        if (deviation > tol) desc = describe_deviation(deviation);
        return std::make_pair(deviation, std::move(desc));
      }));

  report.families.push_back(run_family(
      "pseudoscalar", cases_per_family, seed, 2, tolerance,
      [&](SeededStream& stream, double tol) {
        const Multivector pseudo = Multivector::pseudoscalar();
        const Multivector m = random_multivector(stream);
        const double square_dev =
            max_abs_difference(product(pseudo, pseudo), Multivector::scalar(-1.0));
        const double central_dev = max_abs_difference(product(pseudo, m), product(m, pseudo));
        const double deviation = std::max(square_dev, central_dev);
        std::string desc;
        if (deviation > tol) desc = describe_deviation(deviation);
        return std::make_pair(deviation, std::move(desc));
      }));

  report.families.push_back(run_family(
      "duality-square", cases_per_family, seed, 3, tolerance,
      [&](SeededStream& stream, double tol) {
        const UnitVector n = sample_isotropic(stream);
        const int s = random_sign(stream);
        const Multivector beable = dual_of(n, s);
        const double deviation =
            max_abs_difference(product(beable, beable), Multivector::scalar(-1.0));
        std::string desc;
        if (deviation > tol) {
          desc = describe_vectors("n", n.vec(), "In^2", (product(beable, beable)).vector_part(),
                                  deviation);
        }
        return std::make_pair(deviation, std::move(desc));
      }));

  report.families.push_back(run_family(
      "product-identity", cases_per_family, seed, 4, tolerance,
      [&](SeededStream& stream, double tol) {
        const UnitVector a = sample_isotropic(stream);
        const UnitVector b = sample_isotropic(stream);
        const int s = random_sign(stream);
        const Multivector raw = product(dual_of(a, s), dual_of(b, s));
        const double sign = static_cast<double>(s);
        const Quaternion got{raw[kScalar], sign * raw[kEYZ], sign * raw[kEZX],
                             sign * raw[kEXY]};
        const Vec3 axis = (-sign) * cross(a, b);
        const Quaternion want{-dot(a, b), axis.x, axis.y, axis.z};
        const double deviation =
            std::max({std::abs(got.w - want.w), std::abs(got.x - want.x),
                      std::abs(got.y - want.y), std::abs(got.z - want.z)});
        std::string desc;
        if (deviation > tol) desc = describe_vectors("a", a.vec(), "b", b.vec(), deviation);
        return std::make_pair(deviation, std::move(desc));
      }));

  report.families.push_back(run_family(
      "quaternion-norm", cases_per_family, seed, 5, tolerance,
      [&](SeededStream& stream, double tol) {
        const Quaternion p{uniform_signed(stream), uniform_signed(stream),
                           uniform_signed(stream), uniform_signed(stream)};
        const Quaternion q{uniform_signed(stream), uniform_signed(stream),
                           uniform_signed(stream), uniform_signed(stream)};
        const Quaternion pq =
            Quaternion::from_even(product(p.to_multivector(), q.to_multivector()));
        const double deviation =
            std::abs(quaternion_norm(pq) - quaternion_norm(p) * quaternion_norm(q));
        std::string desc;
        if (deviation > tol) desc = describe_deviation(deviation);
        return std::make_pair(deviation, std::move(desc));
      }));

  report.families.push_back(run_family(
      "hopf-fiber", cases_per_family, seed, 6, tolerance,
      [&](SeededStream& stream, double tol) {
        const Quaternion q = random_unit_quaternion(stream);
        const double t = kPi * uniform_signed(stream);
        const Multivector q_mv = q.to_multivector();
        const Multivector moved_mv = product(q_mv, fiber_rotor(t).to_multivector());
        const Multivector pole = Multivector::vector(Vec3{0.0, 0.0, 1.0});
        const auto project = [&](const Multivector& m) {
          return product(product(m, pole), m.reverse()).vector_part();
        };
        const Vec3 base = project(q_mv);
        const Vec3 moved = project(moved_mv);
        const double fiber_dev = std::max(
            {std::abs(base.x - moved.x), std::abs(base.y - moved.y), std::abs(base.z - moved.z)});
        const double norm_dev = std::abs(norm(base) - 1.0);
        const double deviation = std::max(fiber_dev, norm_dev);
        std::string desc;
        if (deviation > tol) desc = describe_vectors("h(q)", base, "h(qf)", moved, deviation);
        return std::make_pair(deviation, std::move(desc));
      }));

  return report;
}

}  // namespace bellsim
