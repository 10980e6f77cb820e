#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include "core/bell.hpp"
#include "core/chsh.hpp"
#include "core/error.hpp"
#include "core/experiment.hpp"
#include "core/rng.hpp"
#include "core/vec.hpp"

using namespace bellsim;

namespace {

constexpr double kTsirelson = 2.8284271247461903;  // 2 * sqrt(2)

DetectorSettings coplanar_settings(double a, double ap, double b, double bp) {
  return {coplanar_direction(a), coplanar_direction(ap), coplanar_direction(b),
          coplanar_direction(bp)};
}

}  // namespace

TEST_CASE("cosine correlation is the negative dot product") {
  const UnitVector z = UnitVector::z_axis();
  CHECK(analytic_correlation_cosine(z, z) == -1.0);
  CHECK(analytic_correlation_cosine(z, -z) == 1.0);
  CHECK(analytic_correlation_cosine(z, UnitVector::x_axis()) == 0.0);
  CHECK(std::abs(analytic_correlation_cosine(z, coplanar_direction(60.0)) + 0.5) <=
        1e-15);
  CHECK(analytic_correlation_cosine(z, coplanar_direction(60.0)) ==
        analytic_correlation_cosine(coplanar_direction(60.0), z));
}

TEST_CASE("the four-term string combines correlations with the right signs") {
  const UnitVector x = UnitVector::x_axis();
  auto source = CorrelationSource::custom(
      "affine-probe", [&](const UnitVector& a, const UnitVector& b) {
        return 1.0 + 3.0 * dot(a.vec(), x.vec()) + 5.0 * dot(b.vec(), x.vec()) +
               7.0 * dot(a.vec(), x.vec()) * dot(b.vec(), x.vec());
      });
  // E(a,b)=1, E(a,b')=6, E(a',b)=4, E(a',b')=16, so the string is -5.
  const DetectorSettings s{UnitVector::z_axis(), x, UnitVector::z_axis(), x};
  CHECK(chsh_value(source, s) == -5.0);
  CHECK(source.standard_error(s.a, s.b) == 0.0);
  CHECK(source.kind() == CorrelationSource::Kind::Custom);
  CHECK(source.label() == "affine-probe");
}

TEST_CASE("both analytic sources peak at the quarter-offset quadruple") {
  const DetectorSettings s = coplanar_settings(0.0, 90.0, 45.0, 315.0);
  CHECK(std::abs(chsh_value(CorrelationSource::cosine(), s) + kTsirelson) <= 1e-14);
  CHECK(std::abs(chsh_value(CorrelationSource::linear(), s) + 2.0) <= 1e-14);
}

TEST_CASE("the string cancels on the symmetric quadruple") {
  const DetectorSettings s = coplanar_settings(0.0, 90.0, 45.0, 135.0);
  CHECK(std::abs(chsh_value(CorrelationSource::cosine(), s)) <= 1e-15);
  CHECK(std::abs(chsh_value(CorrelationSource::linear(), s)) <= 1e-14);
}

TEST_CASE("linear correlations never push the string past the classical bound") {
  SeededStream angles(2026);
  const CorrelationSource source = CorrelationSource::linear();
  for (int rep = 0; rep < 500; ++rep) {
    const DetectorSettings s = coplanar_settings(
        360.0 * angles.next_unit(), 360.0 * angles.next_unit(),
        360.0 * angles.next_unit(), 360.0 * angles.next_unit());
    CHECK(std::abs(chsh_value(source, s)) <= 2.0 + 1e-9);
  }
}

TEST_CASE("with_step builds an ascending full-circle grid and rejects bad steps") {
  const ScanSpec unit = ScanSpec::with_step();
  REQUIRE(unit.grid_deg.size() == 360);
  CHECK(unit.grid_deg.front() == 0.0);
  CHECK(unit.grid_deg.back() == 359.0);
  CHECK(unit.refine);

  const ScanSpec coarse = ScanSpec::with_step(5.0);
  CHECK(coarse.grid_deg.size() == 72);

  CHECK_THROWS_AS(ScanSpec::with_step(0.0), DomainError);
  CHECK_THROWS_AS(ScanSpec::with_step(-1.0), DomainError);
  CHECK_THROWS_AS(ScanSpec::with_step(std::nan("")), DomainError);
}

TEST_CASE("the scan rejects empty, non-finite, and unordered grids") {
  const CorrelationSource source = CorrelationSource::cosine();
  CHECK_THROWS_AS(max_abs_chsh(source, ScanSpec{{}, true}), DomainError);
  CHECK_THROWS_AS(max_abs_chsh(source, ScanSpec{{0.0, 90.0, 45.0}, true}), DomainError);
  CHECK_THROWS_AS(max_abs_chsh(source, ScanSpec{{0.0, 0.0, 90.0}, true}), DomainError);
  CHECK_THROWS_AS(
      max_abs_chsh(source, ScanSpec{{0.0, std::numeric_limits<double>::infinity()}, true}),
      DomainError);
}

TEST_CASE("a zero source scans to a zero maximum") {
  auto source =
      CorrelationSource::custom("null", [](const UnitVector&, const UnitVector&) {
        return 0.0;
      });
  const ChshScanResult r = max_abs_chsh(source, ScanSpec::with_step(30.0));
  CHECK(r.max_abs == 0.0);
  CHECK(r.grid_max_abs == 0.0);
  CHECK(r.max_bound_margin == 0.0);
  CHECK(r.combined_standard_error == 0.0);
}

TEST_CASE("cosine scans reach the quantum maximum on grids containing it") {
  for (const double step : {5.0, 1.0}) {
    const ChshScanResult r =
        max_abs_chsh(CorrelationSource::cosine(), ScanSpec::with_step(step));
    CHECK(std::abs(r.grid_max_abs - kTsirelson) <= 1e-12);
    CHECK(std::abs(r.max_abs - kTsirelson) <= 1e-12);
    CHECK(r.max_abs == std::abs(r.value));
    CHECK(r.grid_max_abs <= r.max_abs);
    for (double se : r.term_standard_errors) CHECK(se == 0.0);
    CHECK(r.combined_standard_error == 0.0);
  }
}

TEST_CASE("refinement recovers the quantum maximum from a misaligned grid") {
  // No quadruple of multiples of 7 degrees realizes the optimal offsets, so
  // the raw grid undershoots and the polish has to close the gap.
  const CorrelationSource source = CorrelationSource::cosine();
  ScanSpec spec = ScanSpec::with_step(7.0);

  spec.refine = false;
  const ChshScanResult raw = max_abs_chsh(source, spec);
  CHECK(raw.max_abs == raw.grid_max_abs);
  CHECK(raw.grid_max_abs < kTsirelson - 1e-4);

  spec.refine = true;
  const ChshScanResult polished = max_abs_chsh(source, spec);
  CHECK(polished.grid_max_abs == raw.grid_max_abs);
  CHECK(std::abs(polished.max_abs - kTsirelson) <= 1e-6);
}

TEST_CASE("linear scans plateau at the classical bound") {
  const ChshScanResult r =
      max_abs_chsh(CorrelationSource::linear(), ScanSpec::with_step(1.0));
  CHECK(std::abs(r.max_abs - 2.0) <= 1e-9);
  CHECK(std::abs(r.grid_max_abs - 2.0) <= 1e-9);
  CHECK(r.max_bound_margin <= 2.0 + 1e-12);
  CHECK(r.max_abs == std::abs(r.value));
}

TEST_CASE("scan results reproduce the string from their own terms") {
  for (const CorrelationSource& source :
       {CorrelationSource::linear(), CorrelationSource::cosine()}) {
    const ChshScanResult r = max_abs_chsh(source, ScanSpec::with_step(5.0));
    const double resummed =
        r.term_values[0] + r.term_values[1] + r.term_values[2] - r.term_values[3];
    CHECK(r.value == resummed);
    for (std::size_t k = 0; k < 4; ++k) {
      const UnitVector& first = k < 2 ? r.settings.a : r.settings.a_prime;
      const UnitVector& second = k % 2 == 0 ? r.settings.b : r.settings.b_prime;
      CHECK(r.term_values[k] == source.value(first, second));
    }
  }
}

TEST_CASE("empirical sources validate their ensemble") {
  CHECK_THROWS_AS(CorrelationSource::empirical(nullptr), DomainError);
  CHECK_THROWS_AS(
      CorrelationSource::empirical(std::make_shared<const std::vector<UnitVector>>()),
      DomainError);
}

TEST_CASE("empirical scans agree with the direct estimator and respect the bound") {
  ExperimentConfig cfg;
  cfg.trials = 4096;
  cfg.master_seed = 11;
  const RecordedEnsemble ensemble = generate_ensemble(cfg);
  const auto lambdas = ensemble.shared_lambdas();
  const CorrelationSource source = CorrelationSource::empirical(lambdas);

  const ChshScanResult r = max_abs_chsh(source, ScanSpec::with_step(30.0));

  // The packed-bit pair table and the plain estimator sum the same integers.
  const std::array<std::pair<const UnitVector*, const UnitVector*>, 4> pairs{
      {{&r.settings.a, &r.settings.b},
       {&r.settings.a, &r.settings.b_prime},
       {&r.settings.a_prime, &r.settings.b},
       {&r.settings.a_prime, &r.settings.b_prime}}};
  double rss2 = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const EstimatedCorrelation direct =
        empirical_correlation(*lambdas, *pairs[k].first, *pairs[k].second);
    CHECK(r.term_values[k] == direct.value);
    CHECK(r.term_standard_errors[k] == direct.standard_error);
    rss2 += direct.standard_error * direct.standard_error;
  }
  CHECK(r.combined_standard_error == std::sqrt(rss2));
  CHECK(r.value ==
        r.term_values[0] + r.term_values[1] + r.term_values[2] - r.term_values[3]);

  // Refinement never moves an empirical result off its grid.
  CHECK(r.max_abs == r.grid_max_abs);
  CHECK(r.max_bound_margin <= 2.0 + 1e-12);
}

TEST_CASE("scan results are independent of the worker count") {
  ExperimentConfig cfg;
  cfg.trials = 2048;
  cfg.master_seed = 3;
  const auto lambdas = generate_ensemble(cfg).shared_lambdas();

  for (const CorrelationSource& source :
       {CorrelationSource::empirical(lambdas), CorrelationSource::cosine()}) {
    const ChshScanResult one = max_abs_chsh(source, ScanSpec::with_step(15.0), 1);
    const ChshScanResult three = max_abs_chsh(source, ScanSpec::with_step(15.0), 3);
    CHECK(one.angles_deg == three.angles_deg);
    CHECK(one.value == three.value);
    CHECK(one.max_abs == three.max_abs);
    CHECK(one.grid_max_abs == three.grid_max_abs);
    CHECK(one.max_bound_margin == three.max_bound_margin);
    CHECK(one.combined_standard_error == three.combined_standard_error);
  }
}
