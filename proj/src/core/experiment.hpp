#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core/clifford.hpp"
#include "core/rng.hpp"
#include "core/vec.hpp"

namespace bellsim {

enum class DirectionMode { Continuous, Discrete };
enum class LatticeKind { Fibonacci, Octahedral };

struct ExperimentConfig {
  std::uint64_t trials = 1'000'000;
  std::uint64_t master_seed = 1;
  std::uint64_t settings_seed = 1;

  DirectionMode mode = DirectionMode::Continuous;
  // Discrete mode draws hidden directions from a fixed finite direction set:
  // a Fibonacci-sphere lattice of `lattice_size` points, or the six
  // octahedral axes (+-e_x, +-e_y, +-e_z) for exact hand-checkable runs.
  std::uint64_t lattice_size = 1'000'000;
  LatticeKind lattice = LatticeKind::Fibonacci;

  std::vector<double> angles_deg = {0, 30, 60, 90, 120, 150, 180};

  // Tie tolerance for the sign observables; meaningful only in discrete
  // mode, continuous runs always use exact-zero ties.
  double tie_epsilon = 0.0;

  unsigned threads = 0;  // 0 = hardware concurrency; never affects results

  // Run-identity timestamp recorded in the manifest. Unset stays null in
  // every output, keeping repeat runs byte-identical by default.
  std::optional<std::string> timestamp_utc;

  double effective_tie_epsilon() const {
    return mode == DirectionMode::Discrete ? tie_epsilon : 0.0;
  }

  void validate() const;  // throws DomainError on bad values
};

// Point i of the direction set configured for discrete mode.
UnitVector lattice_direction(const ExperimentConfig& cfg, std::uint64_t index);

class RecordedEnsemble;
RecordedEnsemble generate_ensemble(const ExperimentConfig& cfg);

// Proof that ensemble recording completed. Only generate_ensemble mints one;
// holding a reference is what authorizes choosing detector settings, which
// makes "settings chosen after the ensemble exists" a compile-time property
// of this API (the C layer re-checks it at run time).
class PhaseToken {
 public:
  PhaseToken(const PhaseToken&) = default;
  PhaseToken(PhaseToken&&) = default;
  PhaseToken& operator=(const PhaseToken&) = default;
  PhaseToken& operator=(PhaseToken&&) = default;

 private:
  PhaseToken() = default;
  friend RecordedEnsemble generate_ensemble(const ExperimentConfig& cfg);
};

// The complete set of hidden directions for one run. Trial j's station 1
// records lambda_j; station 2 records -lambda_j.
class RecordedEnsemble {
 public:
  std::uint64_t size() const { return lambdas_->size(); }
  std::span<const UnitVector> lambdas() const { return *lambdas_; }
  std::shared_ptr<const std::vector<UnitVector>> shared_lambdas() const {
    return lambdas_;
  }

  UnitVector station_one(std::uint64_t trial) const { return (*lambdas_)[trial]; }
  UnitVector station_two(std::uint64_t trial) const { return -(*lambdas_)[trial]; }

  const PhaseToken& token() const { return token_; }

 private:
  RecordedEnsemble(std::shared_ptr<const std::vector<UnitVector>> lambdas,
                   PhaseToken token)
      : lambdas_(std::move(lambdas)), token_(token) {}
  friend RecordedEnsemble generate_ensemble(const ExperimentConfig& cfg);

  std::shared_ptr<const std::vector<UnitVector>> lambdas_;
  PhaseToken token_;
};

// Detector-setting chooser for the delayed-choice protocol: constructible
// only with a phase token, i.e. only once the ensemble is on record. Random
// pairs come from the settings stream, which is derived from the settings
// seed alone, so it shares nothing with the ensemble stream.
class DelayedChoice {
 public:
  DelayedChoice(const ExperimentConfig& cfg, const PhaseToken& proof);

  // Canonical coplanar pair for a configured angle: a = e_z, b in the z-x
  // plane at angle_deg from a. Angles outside [0, 180] are domain errors.
  std::pair<UnitVector, UnitVector> coplanar_pair(double angle_deg) const;

  // Next independently drawn isotropic settings pair.
  std::pair<UnitVector, UnitVector> random_pair();

 private:
  SeededStream settings_stream_;
};

struct EstimatedCorrelation {
  double value = 0.0;
  double standard_error = 0.0;
};

// Two-station product average (1/N) sum_j A(a; lambda_j) B(b; lambda_j).
// The +-1 products are summed as integers (chunk partials combined in chunk
// order), so the value is exact for the given ensemble and independent of
// thread count. Standard error: sqrt((1 - E^2) / N).
EstimatedCorrelation empirical_correlation(std::span<const UnitVector> lambdas,
                                           const UnitVector& a, const UnitVector& b,
                                           double tie_epsilon = 0.0,
                                           unsigned threads = 1);

struct CorrelationRow {
  double angle_deg = 0.0;
  double a_dot_b = 0.0;
  double empirical = 0.0;
  double linear_prediction = 0.0;
  double cosine_prediction = 0.0;
  double standard_error = 0.0;
  std::uint64_t trials = 0;
};

struct CorrelationSummary {
  double max_abs_dev_linear = 0.0;  // max |empirical - linear| over rows
  double max_abs_dev_cosine = 0.0;
  // Same deviations in standard-error units; +inf when a zero-SE row
  // disagrees (cannot happen for exact-endpoint angles).
  double max_dev_linear_in_se = 0.0;
  double max_dev_cosine_in_se = 0.0;
};

struct CorrelationReport {
  std::vector<CorrelationRow> rows;
  CorrelationSummary summary;
};

// Full pipeline: record the ensemble, then (and only then) choose coplanar
// settings for each configured angle and estimate the correlation, reporting
// it next to both analytic predictions without adjudicating between them.
CorrelationReport compare_predictions(const ExperimentConfig& cfg);

// Certifies that the +-1 a trial contributes is independent of whether the
// detector's observable is nominally the scalar sign or the orientation
// bivector: the sign is computed both directly and from the scalar part of
// the Clifford product (lambda)(n), and both orientation beables are checked
// to square to -1.
struct OperationalIdentityReport {
  int outcome_direct = 0;
  int outcome_product_scalar = 0;
  Multivector beable_positive;
  Multivector beable_negative;
  bool beables_square_to_minus_one = false;
  bool outcomes_match = false;
};

OperationalIdentityReport operational_identity_check(const UnitVector& lambda,
                                                     const UnitVector& n,
                                                     double tie_epsilon = 0.0);

}  // namespace bellsim
