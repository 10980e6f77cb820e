#include "core/trivector.hpp"

#include <cmath>

#include "core/error.hpp"

namespace bellsim {

TrivectorOrientation::TrivectorOrientation(int sign) : sign_(sign) {
  if (sign != 1 && sign != -1)
    throw DomainError("TrivectorOrientation: sign must be +1 or -1");
}

OrientationEnsemble OrientationEnsemble::exhaustive() {
  return {Mode::Exhaustive, 1, 1};
}

OrientationEnsemble OrientationEnsemble::sampled(std::uint64_t draws, SeededStream& rng) {
  if (draws == 0) throw DomainError("OrientationEnsemble: need at least one draw");
  OrientationEnsemble e;
  e.mode = Mode::Sampled;
  e.positive_count = 0;
  e.negative_count = 0;
  for (std::uint64_t i = 0; i < draws; ++i) {
    if (rng.next_u64() >> 63)
      ++e.positive_count;
    else
      ++e.negative_count;
  }
  return e;
}

Multivector beable(const UnitVector& n, const TrivectorOrientation& mu) {
  return dual(n, mu.sign());
}

Quaternion joint_product(const TrivectorOrientation& mu, const UnitVector& a,
                         const UnitVector& b) {
  return bivector_product(a, b, mu.sign());
}

DirectedExpectation directed_expectation(const OrientationEnsemble& ensemble,
                                         const UnitVector& a, const UnitVector& b) {
  if (ensemble.total() == 0)
    throw DomainError("directed_expectation: empty orientation ensemble");
  if (ensemble.mode == OrientationEnsemble::Mode::Exhaustive &&
      ensemble.positive_count != ensemble.negative_count)
    throw DomainError("directed_expectation: exhaustive mode must be balanced");

  const Quaternion plus = joint_product(TrivectorOrientation(1), a, b);
  const Quaternion minus = joint_product(TrivectorOrientation(-1), a, b);

  const double np = static_cast<double>(ensemble.positive_count);
  const double nm = static_cast<double>(ensemble.negative_count);
  const double inv = 1.0 / (np + nm);

  // Weighted coefficient average. The scalars agree, so that component is
  // exact; the bivector coefficients are opposite and cancel exactly when
  // the counts balance.
  const Quaternion mean{(np * plus.w + nm * minus.w) * inv,
                        (np * plus.x + nm * minus.x) * inv,
                        (np * plus.y + nm * minus.y) * inv,
                        (np * plus.z + nm * minus.z) * inv};

  DirectedExpectation out;
  out.value = mean.to_multivector();
  out.scalar = mean.w;
  out.residue = {mean.x, mean.y, mean.z};
  out.residue_norm =
      std::sqrt(mean.x * mean.x + mean.y * mean.y + mean.z * mean.z);
  return out;
}

}  // namespace bellsim
