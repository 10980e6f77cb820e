#pragma once

#include <span>

#include "core/rng.hpp"
#include "core/vec.hpp"

namespace bellsim {

// Tie resolution shared by both stations: the sign of the first nonzero
// component of the detector direction.
int tie_sign(const UnitVector& n);

// Station outcome for detector direction n and hidden direction lambda:
// the sign of lambda . n. An exact tie (dot within tie_epsilon of zero;
// default: exactly 0.0) resolves to tie_sign(n), so the outcome is always
// +-1. The epsilon exists only for discretized-direction runs; continuous
// pipelines pass 0.0.
int observable_A(const UnitVector& n, const UnitVector& lambda,
                 double tie_epsilon = 0.0);

// The partner station's outcome, identically -observable_A including ties.
int observable_B(const UnitVector& n, const UnitVector& lambda,
                 double tie_epsilon = 0.0);

// Uniform direction on S^2: three independent standard normals, normalized
// (resampling on the zero vector). Consumes a fixed number of stream values
// per draw, so per-trial substreams stay aligned.
UnitVector sample_isotropic(SeededStream& rng);

// Correlation predicted for the sign-observable model with an isotropic
// hidden direction: -1 + (2/pi) * arccos(a . b).
double analytic_correlation_linear(const UnitVector& a, const UnitVector& b);

// Mean of observable_A over recorded hidden directions. The +-1 terms are
// accumulated as integers, so the result is exact and independent of
// iteration partitioning. Empty input is a domain error.
double marginal_mean(std::span<const UnitVector> lambdas, const UnitVector& n,
                     double tie_epsilon = 0.0);

}  // namespace bellsim
