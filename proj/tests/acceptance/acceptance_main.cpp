// Acceptance gate: runs every release criterion end to end and prints one
// PASS/FAIL line per criterion. Exits non-zero if any criterion fails.

#include <bellsim.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "core/algebra_check.hpp"
#include "core/bell.hpp"
#include "core/chsh.hpp"
#include "core/experiment.hpp"
#include "core/rng.hpp"
#include "core/trivector.hpp"
#include "core/vec.hpp"

namespace fs = std::filesystem;
using namespace bellsim;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

bool g_all_pass = true;

void run_criterion(const char* name, double budget_seconds,
                   const std::function<Outcome()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = fn();
  } catch (const std::exception& e) {
    outcome = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  bool pass = outcome.pass;
  std::string detail = outcome.detail;
  if (budget_seconds > 0.0 && elapsed >= budget_seconds) {
    pass = false;
    std::ostringstream over;
    over << detail << (detail.empty() ? "" : "; ") << "exceeded " << budget_seconds
         << "s budget";
    detail = over.str();
  }
  g_all_pass = g_all_pass && pass;
  std::printf("%s  %-32s %7.2fs  %s\n", pass ? "PASS" : "FAIL", name, elapsed,
              detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(3);
  out << v;
  return out.str();
}

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome check_algebra_identities() {
  const AlgebraCheckReport report = run_algebra_checks(10'000, 1, 1e-12);
  std::ostringstream detail;
  detail << report.families.size() << " families x " << report.cases_per_family
         << " cases, worst deviation " << fmt(report.worst_deviation());
  if (!report.passed()) {
    for (const auto& family : report.families) {
      if (!family.passed()) {
        detail << "; " << family.name << " failed " << family.failures << " cases";
      }
    }
  }
  return {report.passed(), detail.str()};
}

std::optional<CorrelationReport> g_simulation;

Outcome check_linear_agreement() {
  ExperimentConfig cfg;
  cfg.trials = 1'000'000;
  g_simulation = compare_predictions(cfg);

  double worst_se = 0.0;
  double worst_abs = 0.0;
  bool pass = true;
  for (const CorrelationRow& row : g_simulation->rows) {
    const double dev = std::abs(row.empirical - row.linear_prediction);
    worst_abs = std::max(worst_abs, dev);
    if (row.standard_error > 0.0) {
      worst_se = std::max(worst_se, dev / row.standard_error);
    } else if (dev > 0.0) {
      pass = false;
    }
    pass = pass && dev <= 5.0 * row.standard_error;
  }
  std::ostringstream detail;
  detail << g_simulation->rows.size() << " angles, worst deviation " << fmt(worst_se)
         << " SE (" << fmt(worst_abs) << " absolute)";
  return {pass, detail.str()};
}

Outcome check_discrimination() {
  if (!g_simulation) return {false, "no simulation report available"};
  const CorrelationRow* sixty = nullptr;
  for (const CorrelationRow& row : g_simulation->rows) {
    if (row.angle_deg == 60.0) sixty = &row;
  }
  if (!sixty) return {false, "no 60-degree row in the report"};

  const double to_linear = std::abs(sixty->empirical - (-1.0 / 3.0));
  const double to_cosine = std::abs(sixty->empirical - (-0.5));
  const bool pass = to_linear <= 5.0 * sixty->standard_error &&
                    to_cosine >= 20.0 * sixty->standard_error;
  std::ostringstream detail;
  detail << "E(60) = " << sixty->empirical << ": " << fmt(to_linear / sixty->standard_error)
         << " SE from -1/3, " << fmt(to_cosine / sixty->standard_error)
         << " SE from -1/2";
  return {pass, detail.str()};
}

Outcome check_chsh_bounds() {
  const ScanSpec spec = ScanSpec::with_step(1.0);

  const ChshScanResult linear = max_abs_chsh(CorrelationSource::linear(), spec);
  const double linear_gap = std::abs(linear.max_abs - 2.0);

  const ChshScanResult cosine = max_abs_chsh(CorrelationSource::cosine(), spec);
  const double cosine_gap = std::abs(cosine.max_abs - 2.0 * std::sqrt(2.0));

  ExperimentConfig cfg;
  cfg.trials = 1'000'000;
  const auto lambdas = generate_ensemble(cfg).shared_lambdas();
  const ChshScanResult empirical =
      max_abs_chsh(CorrelationSource::empirical(lambdas), spec);

  const bool pass = linear_gap <= 1e-9 && cosine_gap <= 1e-6 &&
                    empirical.max_bound_margin <= 2.0 + 1e-12;
  std::ostringstream detail;
  detail << "linear max 2" << (linear.max_abs >= 2.0 ? "+" : "-") << fmt(linear_gap)
         << ", cosine gap " << fmt(cosine_gap) << ", empirical margin "
         << fmt(empirical.max_bound_margin);
  return {pass, detail.str()};
}

Outcome check_orientation_average() {
  SeededStream rng(5);
  const OrientationEnsemble both = OrientationEnsemble::exhaustive();
  double worst_scalar = 0.0;
  double worst_residue = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const UnitVector a = sample_isotropic(rng);
    const UnitVector b = sample_isotropic(rng);
    const DirectedExpectation e = directed_expectation(both, a, b);
    worst_scalar = std::max(worst_scalar, std::abs(e.scalar - (-dot(a, b))));
    for (const double coeff : e.residue)
      worst_residue = std::max(worst_residue, std::abs(coeff));
  }
  const bool pass = worst_scalar <= 1e-12 && worst_residue <= 1e-12;
  std::ostringstream detail;
  detail << "1000 pairs, scalar deviation " << fmt(worst_scalar) << ", residue "
         << fmt(worst_residue);
  return {pass, detail.str()};
}

Outcome check_marginal_means() {
  ExperimentConfig cfg;
  cfg.trials = 1'000'000;
  const RecordedEnsemble ensemble = generate_ensemble(cfg);
  const double bound = 5.0 / std::sqrt(static_cast<double>(cfg.trials));

  SeededStream rng(12321);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const UnitVector n = sample_isotropic(rng);
    worst = std::max(worst, std::abs(marginal_mean(ensemble.lambdas(), n)));
  }
  std::ostringstream detail;
  detail << "10 directions, worst |mean| " << fmt(worst) << " (bound " << fmt(bound)
         << ")";
  return {worst <= bound, detail.str()};
}

Outcome check_byte_determinism(const std::string& cli) {
  // Through the library: same seeds, different worker counts.
  Outcome outcome{true, ""};
  bellsim_config* cfg = bellsim_config_new();
  if (!cfg) return {false, "config allocation failed"};
  bellsim_config_set_trials(cfg, 200'000);
  bellsim_config_set_seeds(cfg, 3, 3);

  std::string csv_one, json_one;
  for (const unsigned threads : {1u, 4u}) {
    bellsim_config_set_threads(cfg, threads);
    bellsim_report* report = nullptr;
    if (bellsim_simulate(cfg, &report) != BELLSIM_OK) {
      bellsim_config_free(cfg);
      return {false, std::string("simulate failed: ") + bellsim_last_error()};
    }
    char* csv = nullptr;
    char* json = nullptr;
    bellsim_report_csv(report, &csv);
    bellsim_report_json(report, &json);
    if (threads == 1u) {
      csv_one = csv;
      json_one = json;
    } else if (csv_one != csv || json_one != json) {
      outcome = {false, "library outputs differ across thread counts"};
    }
    bellsim_string_free(csv);
    bellsim_string_free(json);
    bellsim_report_free(report);
  }
  bellsim_config_free(cfg);
  if (!outcome.pass) return outcome;

  // Through the CLI: repeated and cross-thread-count runs, file for file.
  if (cli.empty()) return {false, "no CLI binary path supplied"};
  const fs::path dir =
      fs::temp_directory_path() / ("bellsim-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);

  const std::string common = "\"" + cli +
                             "\" simulate --trials 200000 --seed 3 --settings-seed 3";
  const std::string base = (dir / "run").string();
  const std::vector<std::string> commands = {
      common + " --threads 1 --output " + base + "1 >/dev/null 2>&1",
      common + " --threads 4 --output " + base + "2 >/dev/null 2>&1",
      common + " --threads 1 --output " + base + "3 >/dev/null 2>&1",
  };
  for (const std::string& command : commands) {
    if (std::system(command.c_str()) != 0) {
      fs::remove_all(dir);
      return {false, "CLI run failed"};
    }
  }
  for (const char* ext : {".csv", ".json"}) {
    const auto one = read_file(base + "1" + ext);
    const auto two = read_file(base + "2" + ext);
    const auto three = read_file(base + "3" + ext);
    if (!one || !two || !three) {
      fs::remove_all(dir);
      return {false, std::string("missing CLI output ") + ext};
    }
    if (*one != *two || *one != *three) {
      fs::remove_all(dir);
      return {false, std::string("CLI ") + ext + " outputs differ"};
    }
  }
  fs::remove_all(dir);
  return {true, "library and CLI outputs byte-identical across reruns and threads"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  run_criterion("algebra-identities", 5.0, check_algebra_identities);
  run_criterion("linear-model-agreement", 30.0, check_linear_agreement);
  run_criterion("model-discrimination-60deg", 0.0, check_discrimination);
  run_criterion("chsh-scan-bounds", 60.0, check_chsh_bounds);
  run_criterion("orientation-average-exactness", 1.0, check_orientation_average);
  run_criterion("marginal-means-vanish", 0.0, check_marginal_means);
  run_criterion("byte-identical-reruns", 0.0,
                [&cli] { return check_byte_determinism(cli); });

  std::printf("%s\n", g_all_pass ? "ACCEPTANCE: all criteria passed"
                                 : "ACCEPTANCE: criteria failed");
  return g_all_pass ? 0 : 1;
}
