#include "core/bell.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace bellsim {

int tie_sign(const UnitVector& n) {
  if (n.x() != 0.0) return n.x() > 0.0 ? 1 : -1;
  if (n.y() != 0.0) return n.y() > 0.0 ? 1 : -1;
  return n.z() > 0.0 ? 1 : -1;  // unit vector: some component is nonzero
}

int observable_A(const UnitVector& n, const UnitVector& lambda, double tie_epsilon) {
  const double d = dot(lambda, n);
  if (std::abs(d) <= tie_epsilon) return tie_sign(n);
  return d > 0.0 ? 1 : -1;
}

int observable_B(const UnitVector& n, const UnitVector& lambda, double tie_epsilon) {
  return -observable_A(n, lambda, tie_epsilon);
}

UnitVector sample_isotropic(SeededStream& rng) {
  for (;;) {
    const auto [g0, g1] = rng.next_normal_pair();
    const auto [g2, g3] = rng.next_normal_pair();
    (void)g3;
    const Vec3 v{g0, g1, g2};
    if (dot(v, v) == 0.0) continue;
    return UnitVector::from_unnormalized(v);
  }
}

double analytic_correlation_linear(const UnitVector& a, const UnitVector& b) {
  // atan2 of (|a x b|, a . b) is the angle between a and b, and unlike
  // acos(a . b) it stays fully conditioned near 0 and pi, where acos
  // amplifies coordinate rounding to ~1e-8.
  const double angle = std::atan2(norm(cross(a, b)), dot(a, b));
  return -1.0 + angle * (2.0 / kPi);
}

double marginal_mean(std::span<const UnitVector> lambdas, const UnitVector& n,
                     double tie_epsilon) {
  if (lambdas.empty()) throw DomainError("marginal_mean: empty ensemble");
  long long sum = 0;
  for (const UnitVector& lambda : lambdas) sum += observable_A(n, lambda, tie_epsilon);
  return static_cast<double>(sum) / static_cast<double>(lambdas.size());
}

}  // namespace bellsim
