#pragma once

#include <array>
#include <cstdint>

#include "core/clifford.hpp"
#include "core/rng.hpp"
#include "core/vec.hpp"

namespace bellsim {

// Handedness of space as the hidden variable: the pseudoscalar taken with a
// random sign.
class TrivectorOrientation {
 public:
  explicit TrivectorOrientation(int sign);

  int sign() const { return sign_; }
  Multivector as_multivector() const {
    return static_cast<double>(sign_) * Multivector::pseudoscalar();
  }

 private:
  int sign_;
};

// Counts of +I / -I draws. Exhaustive mode is the balanced two-point
// measure; sampled mode records fair Bernoulli draws from a stream.
struct OrientationEnsemble {
  enum class Mode { Exhaustive, Sampled };

  Mode mode = Mode::Exhaustive;
  std::uint64_t positive_count = 1;
  std::uint64_t negative_count = 1;

  static OrientationEnsemble exhaustive();
  static OrientationEnsemble sampled(std::uint64_t draws, SeededStream& rng);

  std::uint64_t total() const { return positive_count + negative_count; }
};

// The observable carried by a detector direction under orientation mu:
// the unit bivector mu . n = dual(n, sign). Squares to -1.
Multivector beable(const UnitVector& n, const TrivectorOrientation& mu);

// Joint two-station product (mu . a)(mu . b) as a unit quaternion whose
// coefficients are read in the orientation-adapted bivector basis: scalar
// part -a.b for either orientation, bivector part -mu.(a x b) flipping sign
// with it.
Quaternion joint_product(const TrivectorOrientation& mu, const UnitVector& a,
                         const UnitVector& b);

struct DirectedExpectation {
  Multivector value;                        // scalar + bivector average
  double scalar = 0.0;                      // equals value's scalar part
  std::array<double, 3> residue{};          // bivector part, duality order
  double residue_norm = 0.0;                // Euclidean norm of residue
};

// Equal-weight average of joint_product over the orientation ensemble.
// The two orientations contribute identical scalars and opposite bivector
// coefficients, so exhaustive mode yields exactly (-a.b, 0); sampled mode
// leaves a residue set by the count imbalance, |residue| = |N+ - N-|/N |a x b|.
DirectedExpectation directed_expectation(const OrientationEnsemble& ensemble,
                                         const UnitVector& a, const UnitVector& b);

}  // namespace bellsim
