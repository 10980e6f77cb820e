#include "core/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "core/bell.hpp"
#include "core/chsh.hpp"
#include "core/error.hpp"
#include "core/parallel.hpp"

namespace bellsim {

void ExperimentConfig::validate() const {
  if (trials == 0) throw DomainError("config: trials must be at least 1");
  if (angles_deg.empty()) throw DomainError("config: angle list is empty");
  for (double a : angles_deg) {
    if (!std::isfinite(a) || a < 0.0 || a > 180.0)
      throw DomainError("config: angles must lie in [0, 180] degrees");
  }
  if (!std::isfinite(tie_epsilon) || tie_epsilon < 0.0)
    throw DomainError("config: tie epsilon must be finite and non-negative");
  if (mode == DirectionMode::Discrete) {
    if (lattice_size < 2) throw DomainError("config: lattice needs at least 2 points");
    if (lattice == LatticeKind::Octahedral && lattice_size != 6)
      throw DomainError("config: octahedral lattice has exactly 6 points");
  }
}

UnitVector lattice_direction(const ExperimentConfig& cfg, std::uint64_t index) {
  if (index >= cfg.lattice_size) throw DomainError("lattice_direction: index out of range");
  if (cfg.lattice == LatticeKind::Octahedral) {
    switch (index) {
      case 0: return UnitVector::x_axis();
      case 1: return -UnitVector::x_axis();
      case 2: return UnitVector::y_axis();
      case 3: return -UnitVector::y_axis();
      case 4: return UnitVector::z_axis();
      default: return -UnitVector::z_axis();
    }
  }
  // Fibonacci sphere: latitudes step evenly through (-1, 1), longitudes
  // advance by the golden angle.
  const double m = static_cast<double>(cfg.lattice_size);
  const double i = static_cast<double>(index);
  const double z = 1.0 - (2.0 * i + 1.0) / m;
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
  const double phi = i * golden_angle;
  return UnitVector::from_unnormalized(Vec3{r * std::cos(phi), r * std::sin(phi), z});
}

RecordedEnsemble generate_ensemble(const ExperimentConfig& cfg) {
  cfg.validate();
  auto lambdas = std::make_shared<std::vector<UnitVector>>(cfg.trials,
                                                           UnitVector::z_axis());
  // Each trial draws from its own counter-derived substream, so the recorded
  // ensemble is a pure function of the master seed no matter how the loop is
  // partitioned.
  parallel_chunks(cfg.trials, cfg.threads,
                  [&](unsigned, std::uint64_t begin, std::uint64_t end) {
                    for (std::uint64_t j = begin; j < end; ++j) {
                      SeededStream stream =
                          SeededStream::derive(cfg.master_seed, kStreamEnsemble, j);
                      if (cfg.mode == DirectionMode::Continuous) {
                        (*lambdas)[j] = sample_isotropic(stream);
                      } else {
                        (*lambdas)[j] =
                            lattice_direction(cfg, stream.next_below(cfg.lattice_size));
                      }
                    }
                  });
  return RecordedEnsemble(std::move(lambdas), PhaseToken{});
}

DelayedChoice::DelayedChoice(const ExperimentConfig& cfg, const PhaseToken&)
    : settings_stream_(SeededStream::derive(cfg.settings_seed, kStreamSettings)) {}

std::pair<UnitVector, UnitVector> DelayedChoice::coplanar_pair(double angle_deg) const {
  if (!std::isfinite(angle_deg) || angle_deg < 0.0 || angle_deg > 180.0)
    throw DomainError("coplanar_pair: angle must lie in [0, 180] degrees");
  return {UnitVector::z_axis(), coplanar_direction(angle_deg)};
}

std::pair<UnitVector, UnitVector> DelayedChoice::random_pair() {
  UnitVector a = sample_isotropic(settings_stream_);
  UnitVector b = sample_isotropic(settings_stream_);
  return {a, b};
}

EstimatedCorrelation empirical_correlation(std::span<const UnitVector> lambdas,
                                           const UnitVector& a, const UnitVector& b,
                                           double tie_epsilon, unsigned threads) {
  if (lambdas.empty()) throw DomainError("empirical_correlation: empty ensemble");

  const unsigned workers = resolve_thread_count(threads);
  std::vector<long long> partial(std::max(1u, workers), 0);
  parallel_chunks(lambdas.size(), threads,
                  [&](unsigned w, std::uint64_t begin, std::uint64_t end) {
                    long long sum = 0;
                    for (std::uint64_t j = begin; j < end; ++j) {
                      sum += observable_A(a, lambdas[j], tie_epsilon) *
                             observable_B(b, lambdas[j], tie_epsilon);
                    }
                    partial[w] = sum;
                  });
  long long total = 0;
  for (long long p : partial) total += p;

  const double n = static_cast<double>(lambdas.size());
  EstimatedCorrelation out;
  out.value = static_cast<double>(total) / n;
  out.standard_error = std::sqrt(std::max(0.0, 1.0 - out.value * out.value) / n);
  return out;
}

CorrelationReport compare_predictions(const ExperimentConfig& cfg) {
  cfg.validate();
  const RecordedEnsemble ensemble = generate_ensemble(cfg);
  DelayedChoice chooser(cfg, ensemble.token());

  CorrelationReport report;
  report.rows.reserve(cfg.angles_deg.size());

  auto dev_in_se = [](double dev, double se) {
    if (dev == 0.0) return 0.0;
    return se > 0.0 ? dev / se : std::numeric_limits<double>::infinity();
  };

  for (double angle : cfg.angles_deg) {
    const auto [a, b] = chooser.coplanar_pair(angle);
    const EstimatedCorrelation est = empirical_correlation(
        ensemble.lambdas(), a, b, cfg.effective_tie_epsilon(), cfg.threads);

    CorrelationRow row;
    row.angle_deg = angle;
    row.a_dot_b = dot(a, b);
    row.empirical = est.value;
    row.linear_prediction = analytic_correlation_linear(a, b);
    row.cosine_prediction = analytic_correlation_cosine(a, b);
    row.standard_error = est.standard_error;
    row.trials = cfg.trials;
    report.rows.push_back(row);

    auto& s = report.summary;
    const double dl = std::abs(row.empirical - row.linear_prediction);
    const double dc = std::abs(row.empirical - row.cosine_prediction);
    s.max_abs_dev_linear = std::max(s.max_abs_dev_linear, dl);
    s.max_abs_dev_cosine = std::max(s.max_abs_dev_cosine, dc);
    s.max_dev_linear_in_se =
        std::max(s.max_dev_linear_in_se, dev_in_se(dl, row.standard_error));
    s.max_dev_cosine_in_se =
        std::max(s.max_dev_cosine_in_se, dev_in_se(dc, row.standard_error));
  }
  return report;
}

OperationalIdentityReport operational_identity_check(const UnitVector& lambda,
                                                     const UnitVector& n,
                                                     double tie_epsilon) {
  OperationalIdentityReport report;
  report.outcome_direct = observable_A(n, lambda, tie_epsilon);

  // Same +-1 recovered through the algebra: the scalar part of the product
  // (lambda)(n) is lambda . n, run through the identical sign-plus-tie rule.
  const double scalar_part =
      geometric_product(Multivector::vector(lambda), Multivector::vector(n))
          .scalar_part();
  if (std::abs(scalar_part) <= tie_epsilon) {
    report.outcome_product_scalar = tie_sign(n);
  } else {
    report.outcome_product_scalar = scalar_part > 0.0 ? 1 : -1;
  }

  report.beable_positive = dual(n, 1);
  report.beable_negative = dual(n, -1);
  const Multivector minus_one = Multivector::scalar(-1.0);
  report.beables_square_to_minus_one =
      approx_equal(geometric_product(report.beable_positive, report.beable_positive),
                   minus_one, 1e-12) &&
      approx_equal(geometric_product(report.beable_negative, report.beable_negative),
                   minus_one, 1e-12);
  report.outcomes_match = report.outcome_direct == report.outcome_product_scalar;
  return report;
}

}  // namespace bellsim
