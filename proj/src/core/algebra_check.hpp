#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "core/clifford.hpp"
#include "core/vec.hpp"

namespace bellsim {

// Override points for the kernel operations under test.  Leaving a hook empty
// uses the production implementation; tests inject corrupted versions to
// confirm that a broken table is reported against the right identity family.
struct AlgebraCheckHooks {
  std::function<Multivector(const UnitVector&, int)> dual_fn;
  std::function<Multivector(const Multivector&, const Multivector&)> product_fn;
};

struct AlgebraCheckFamily {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  double worst_deviation = 0.0;
  std::string first_failure;

  bool passed() const { return failures == 0; }
};

struct AlgebraCheckReport {
  std::uint64_t cases_per_family = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::vector<AlgebraCheckFamily> families;

  bool passed() const;
  std::uint64_t total_cases() const;
  std::uint64_t total_failures() const;
  double worst_deviation() const;
};

// Runs `cases_per_family` randomized cases of every identity family against
// `tolerance`.  Families: vector-anticommutation, associativity,
// pseudoscalar, duality-square, product-identity, quaternion-norm,
// hopf-fiber.
AlgebraCheckReport run_algebra_checks(std::uint64_t cases_per_family,
                                      std::uint64_t seed,
                                      double tolerance = 1e-12,
                                      const AlgebraCheckHooks* hooks = nullptr);

}  // namespace bellsim
