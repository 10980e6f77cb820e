#include "bellsim.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/algebra_check.hpp"
#include "core/error.hpp"
#include "core/experiment.hpp"
#include "core/parallel.hpp"
#include "core/report.hpp"
#include "core/version.hpp"

struct bellsim_config {
  bellsim::ExperimentConfig cfg;
};

struct bellsim_report {
  bellsim::RunOutcome outcome;
};

struct bellsim_experiment {
  bellsim::ExperimentConfig cfg;
  std::optional<bellsim::RecordedEnsemble> ensemble;
  std::optional<bellsim::DelayedChoice> chooser;
  std::optional<std::pair<bellsim::UnitVector, bellsim::UnitVector>> settings;
};

namespace {

thread_local std::string g_last_error;

void set_error(std::string msg) { g_last_error = std::move(msg); }

bellsim_status invalid(const char* msg) {
  set_error(msg);
  return BELLSIM_ERR_INVALID_ARGUMENT;
}

template <typename Fn>
bellsim_status guarded(Fn&& fn) noexcept {
  try {
    return fn();
  } catch (const bellsim::PhaseOrderError& e) {
    set_error(e.what());
    return BELLSIM_ERR_PHASE_ORDER;
  } catch (const bellsim::DomainError& e) {
    set_error(e.what());
    return BELLSIM_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return BELLSIM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    set_error(e.what());
    return BELLSIM_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown failure");
    return BELLSIM_ERR_INTERNAL;
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

bellsim_status run_to_report(const bellsim::RunManifest& manifest, bellsim_report** out) {
  auto report = std::make_unique<bellsim_report>();
  report->outcome = bellsim::execute_run(manifest);
  *out = report.release();
  return BELLSIM_OK;
}

}  // namespace

extern "C" {

const char* bellsim_version(void) { return bellsim::kVersion; }

const char* bellsim_last_error(void) { return g_last_error.c_str(); }

void bellsim_string_free(char* s) { delete[] s; }

bellsim_config* bellsim_config_new(void) { return new (std::nothrow) bellsim_config{}; }

void bellsim_config_free(bellsim_config* cfg) { delete cfg; }

bellsim_status bellsim_config_set_trials(bellsim_config* cfg, uint64_t trials) {
  if (!cfg) return invalid("config is null");
  if (trials == 0) return invalid("trials must be at least 1");
  cfg->cfg.trials = trials;
  return BELLSIM_OK;
}

bellsim_status bellsim_config_set_seeds(bellsim_config* cfg, uint64_t master_seed,
                                        uint64_t settings_seed) {
  if (!cfg) return invalid("config is null");
  cfg->cfg.master_seed = master_seed;
  cfg->cfg.settings_seed = settings_seed;
  return BELLSIM_OK;
}

bellsim_status bellsim_config_set_mode(bellsim_config* cfg, bellsim_mode mode) {
  if (!cfg) return invalid("config is null");
  switch (mode) {
    case BELLSIM_MODE_CONTINUOUS:
      cfg->cfg.mode = bellsim::DirectionMode::Continuous;
      return BELLSIM_OK;
    case BELLSIM_MODE_DISCRETE:
      cfg->cfg.mode = bellsim::DirectionMode::Discrete;
      return BELLSIM_OK;
  }
  return invalid("unknown direction mode");
}

bellsim_status bellsim_config_set_lattice(bellsim_config* cfg, bellsim_lattice lattice,
                                          uint64_t size) {
  if (!cfg) return invalid("config is null");
  switch (lattice) {
    case BELLSIM_LATTICE_FIBONACCI:
      cfg->cfg.lattice = bellsim::LatticeKind::Fibonacci;
      break;
    case BELLSIM_LATTICE_OCTAHEDRAL:
      cfg->cfg.lattice = bellsim::LatticeKind::Octahedral;
      break;
    default:
      return invalid("unknown lattice kind");
  }
  cfg->cfg.lattice_size = size;
  return BELLSIM_OK;
}

bellsim_status bellsim_config_set_angles(bellsim_config* cfg, const double* deg, size_t count) {
  if (!cfg) return invalid("config is null");
  if (!deg || count == 0) return invalid("at least one angle is required");
  cfg->cfg.angles_deg.assign(deg, deg + count);
  return BELLSIM_OK;
}

bellsim_status bellsim_config_set_tie_epsilon(bellsim_config* cfg, double epsilon) {
  if (!cfg) return invalid("config is null");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    return invalid("tie epsilon must be finite and non-negative");
  }
  cfg->cfg.tie_epsilon = epsilon;
  return BELLSIM_OK;
}

bellsim_status bellsim_config_set_threads(bellsim_config* cfg, unsigned threads) {
  if (!cfg) return invalid("config is null");
  cfg->cfg.threads = threads;
  return BELLSIM_OK;
}

bellsim_status bellsim_config_set_timestamp(bellsim_config* cfg, const char* utc) {
  if (!cfg) return invalid("config is null");
  if (utc) {
    cfg->cfg.timestamp_utc = std::string(utc);
  } else {
    cfg->cfg.timestamp_utc.reset();
  }
  return BELLSIM_OK;
}

bellsim_status bellsim_simulate(const bellsim_config* cfg, bellsim_report** out) {
  if (!cfg || !out) return invalid("config and report output must be non-null");
  *out = nullptr;
  return guarded([&] { return run_to_report(bellsim::make_simulate_manifest(cfg->cfg), out); });
}

bellsim_status bellsim_predict(const bellsim_config* cfg, bellsim_model model,
                               bellsim_report** out) {
  if (!cfg || !out) return invalid("config and report output must be non-null");
  *out = nullptr;
  if (model != BELLSIM_MODEL_LINEAR && model != BELLSIM_MODEL_COSINE) {
    return invalid("unknown prediction model");
  }
  const auto core_model = model == BELLSIM_MODEL_LINEAR ? bellsim::PredictionModel::Linear
                                                        : bellsim::PredictionModel::Cosine;
  return guarded(
      [&] { return run_to_report(bellsim::make_predict_manifest(cfg->cfg, core_model), out); });
}

bellsim_status bellsim_chsh_scan(const bellsim_config* cfg, bellsim_source source,
                                 double step_deg, int refine, bellsim_report** out) {
  if (!cfg || !out) return invalid("config and report output must be non-null");
  *out = nullptr;
  bellsim::CorrelationSource::Kind kind;
  switch (source) {
    case BELLSIM_SOURCE_LINEAR:
      kind = bellsim::CorrelationSource::Kind::AnalyticLinear;
      break;
    case BELLSIM_SOURCE_COSINE:
      kind = bellsim::CorrelationSource::Kind::AnalyticCosine;
      break;
    case BELLSIM_SOURCE_EMPIRICAL:
      kind = bellsim::CorrelationSource::Kind::Empirical;
      break;
    default:
      return invalid("unknown correlation source");
  }
  return guarded([&] {
    return run_to_report(bellsim::make_chsh_manifest(cfg->cfg, kind, step_deg, refine != 0),
                         out);
  });
}

bellsim_status bellsim_rerun(const char* output_text, bellsim_report** out) {
  if (!output_text || !out) return invalid("output text and report output must be non-null");
  *out = nullptr;
  return guarded([&] {
    const auto manifest = bellsim::manifest_from_output(std::string(output_text));
    return run_to_report(manifest, out);
  });
}

void bellsim_report_free(bellsim_report* report) { delete report; }

bellsim_status bellsim_report_csv(const bellsim_report* report, char** out) {
  if (!report || !out) return invalid("report and string output must be non-null");
  *out = nullptr;
  return guarded([&] {
    *out = copy_string(report->outcome.rendered.csv);
    return BELLSIM_OK;
  });
}

bellsim_status bellsim_report_json(const bellsim_report* report, char** out) {
  if (!report || !out) return invalid("report and string output must be non-null");
  *out = nullptr;
  return guarded([&] {
    *out = copy_string(report->outcome.rendered.json);
    return BELLSIM_OK;
  });
}

bellsim_status bellsim_report_row_count(const bellsim_report* report, size_t* out) {
  if (!report || !out) return invalid("report and count output must be non-null");
  if (report->outcome.correlation) {
    *out = report->outcome.correlation->rows.size();
  } else if (report->outcome.prediction) {
    *out = report->outcome.prediction->size();
  } else {
    *out = 0;
  }
  return BELLSIM_OK;
}

bellsim_status bellsim_report_row(const bellsim_report* report, size_t index, double* angle_deg,
                                  double* a_dot_b, double* empirical, double* linear_value,
                                  double* cosine_value, double* std_error, uint64_t* trials) {
  if (!report) return invalid("report is null");
  if (!report->outcome.correlation) return invalid("not a simulate report");
  const auto& rows = report->outcome.correlation->rows;
  if (index >= rows.size()) return invalid("row index out of range");
  const auto& row = rows[index];
  if (angle_deg) *angle_deg = row.angle_deg;
  if (a_dot_b) *a_dot_b = row.a_dot_b;
  if (empirical) *empirical = row.empirical;
  if (linear_value) *linear_value = row.linear_prediction;
  if (cosine_value) *cosine_value = row.cosine_prediction;
  if (std_error) *std_error = row.standard_error;
  if (trials) *trials = row.trials;
  return BELLSIM_OK;
}

bellsim_status bellsim_report_prediction_row(const bellsim_report* report, size_t index,
                                             double* angle_deg, double* a_dot_b, double* value) {
  if (!report) return invalid("report is null");
  if (!report->outcome.prediction) return invalid("not a predict report");
  const auto& rows = *report->outcome.prediction;
  if (index >= rows.size()) return invalid("row index out of range");
  const auto& row = rows[index];
  if (angle_deg) *angle_deg = row.angle_deg;
  if (a_dot_b) *a_dot_b = row.a_dot_b;
  if (value) *value = row.value;
  return BELLSIM_OK;
}

bellsim_status bellsim_report_chsh(const bellsim_report* report, double* value, double* max_abs,
                                   double* combined_std_error, double angles_deg[4]) {
  if (!report) return invalid("report is null");
  if (!report->outcome.chsh) return invalid("not a CHSH report");
  const auto& result = *report->outcome.chsh;
  if (value) *value = result.value;
  if (max_abs) *max_abs = result.max_abs;
  if (combined_std_error) *combined_std_error = result.combined_standard_error;
  if (angles_deg) {
    for (int i = 0; i < 4; ++i) angles_deg[i] = result.angles_deg[static_cast<size_t>(i)];
  }
  return BELLSIM_OK;
}

bellsim_status bellsim_algebra_check(uint64_t cases_per_family, uint64_t seed, double tolerance,
                                     char** out_json) {
  if (out_json) *out_json = nullptr;
  return guarded([&]() -> bellsim_status {
    if (cases_per_family == 0) throw bellsim::DomainError("cases_per_family must be at least 1");
    if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
      throw bellsim::DomainError("tolerance must be positive and finite");
    }
    const auto report = bellsim::run_algebra_checks(cases_per_family, seed, tolerance);
    if (out_json) {
      bellsim::ordered_json j;
      j["cases_per_family"] = report.cases_per_family;
      j["seed"] = report.seed;
      j["tolerance"] = report.tolerance;
      j["passed"] = report.passed();
      j["total_failures"] = report.total_failures();
      j["worst_deviation"] = report.worst_deviation();
      bellsim::ordered_json families = bellsim::ordered_json::array();
      for (const auto& family : report.families) {
        bellsim::ordered_json fj;
        fj["name"] = family.name;
        fj["cases"] = family.cases;
        fj["failures"] = family.failures;
        fj["worst_deviation"] = family.worst_deviation;
        if (!family.first_failure.empty()) fj["first_failure"] = family.first_failure;
        families.push_back(std::move(fj));
      }
      j["families"] = std::move(families);
      *out_json = copy_string(j.dump(2) + "\n");
    }
    if (!report.passed()) {
      set_error("algebra identity checks found violations");
      return BELLSIM_ERR_CHECK_FAILED;
    }
    return BELLSIM_OK;
  });
}

bellsim_status bellsim_experiment_new(const bellsim_config* cfg, bellsim_experiment** out) {
  if (!cfg || !out) return invalid("config and experiment output must be non-null");
  *out = nullptr;
  return guarded([&] {
    cfg->cfg.validate();
    *out = new bellsim_experiment{cfg->cfg, std::nullopt, std::nullopt, std::nullopt};
    return BELLSIM_OK;
  });
}

void bellsim_experiment_free(bellsim_experiment* experiment) { delete experiment; }

bellsim_status bellsim_experiment_record(bellsim_experiment* experiment) {
  if (!experiment) return invalid("experiment is null");
  return guarded([&] {
    experiment->ensemble = bellsim::generate_ensemble(experiment->cfg);
    experiment->chooser.emplace(experiment->cfg, experiment->ensemble->token());
    experiment->settings.reset();
    return BELLSIM_OK;
  });
}

bellsim_status bellsim_experiment_choose_coplanar(bellsim_experiment* experiment,
                                                  double angle_deg) {
  if (!experiment) return invalid("experiment is null");
  return guarded([&]() -> bellsim_status {
    if (!experiment->chooser) {
      throw bellsim::PhaseOrderError(
          "detector settings requested before the ensemble was recorded");
    }
    experiment->settings = experiment->chooser->coplanar_pair(angle_deg);
    return BELLSIM_OK;
  });
}

bellsim_status bellsim_experiment_choose_random(bellsim_experiment* experiment) {
  if (!experiment) return invalid("experiment is null");
  return guarded([&]() -> bellsim_status {
    if (!experiment->chooser) {
      throw bellsim::PhaseOrderError(
          "detector settings requested before the ensemble was recorded");
    }
    experiment->settings = experiment->chooser->random_pair();
    return BELLSIM_OK;
  });
}

bellsim_status bellsim_experiment_settings(const bellsim_experiment* experiment, double a[3],
                                           double b[3]) {
  if (!experiment) return invalid("experiment is null");
  if (!experiment->settings) return invalid("no detector settings chosen yet");
  const auto& [sa, sb] = *experiment->settings;
  if (a) {
    a[0] = sa.x();
    a[1] = sa.y();
    a[2] = sa.z();
  }
  if (b) {
    b[0] = sb.x();
    b[1] = sb.y();
    b[2] = sb.z();
  }
  return BELLSIM_OK;
}

bellsim_status bellsim_experiment_correlation(const bellsim_experiment* experiment,
                                              double* value, double* std_error) {
  if (!experiment) return invalid("experiment is null");
  return guarded([&]() -> bellsim_status {
    if (!experiment->ensemble) {
      throw bellsim::PhaseOrderError("correlation requested before the ensemble was recorded");
    }
    if (!experiment->settings) {
      throw bellsim::DomainError("no detector settings chosen yet");
    }
    const auto& [a, b] = *experiment->settings;
    const auto estimate = bellsim::empirical_correlation(
        experiment->ensemble->lambdas(), a, b, experiment->cfg.effective_tie_epsilon(),
        bellsim::resolve_thread_count(experiment->cfg.threads));
    if (value) *value = estimate.value;
    if (std_error) *std_error = estimate.standard_error;
    return BELLSIM_OK;
  });
}

}  // extern "C"
