#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/chsh.hpp"
#include "core/clifford.hpp"
#include "core/experiment.hpp"
#include "core/version.hpp"

namespace bellsim {

using ordered_json = nlohmann::ordered_json;

enum class PredictionModel { Linear, Cosine };

std::string to_string(DirectionMode mode);
std::string to_string(LatticeKind kind);
std::string to_string(PredictionModel model);
std::string to_string(CorrelationSource::Kind kind);

DirectionMode direction_mode_from_string(const std::string& s);
LatticeKind lattice_kind_from_string(const std::string& s);
PredictionModel prediction_model_from_string(const std::string& s);
CorrelationSource::Kind source_kind_from_string(const std::string& s);

// Everything needed to reproduce a run: the subcommand, the resolved
// configuration, and the subcommand's own parameters. Serialized into every
// output (CSV comment line and JSON member), and parseable back, so a stored
// output is a complete recipe for regenerating itself. Thread count is
// deliberately absent: it never affects results, so it is not part of a
// run's identity.
struct RunManifest {
  std::string subcommand;
  std::string version = kVersion;
  ExperimentConfig config;

  std::optional<PredictionModel> model;            // predict
  std::optional<CorrelationSource::Kind> source;   // chsh
  std::optional<double> step_deg;                  // chsh
  std::optional<bool> refine;                      // chsh
};

RunManifest make_simulate_manifest(const ExperimentConfig& cfg);
RunManifest make_predict_manifest(const ExperimentConfig& cfg, PredictionModel model);
RunManifest make_chsh_manifest(const ExperimentConfig& cfg, CorrelationSource::Kind source,
                               double step_deg, bool refine);

ordered_json manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const ordered_json& j);

// Recovers the manifest from previously written output: either a CSV whose
// first line is "# manifest: {...}" or a JSON document with a "manifest"
// member.
RunManifest manifest_from_output(const std::string& content);

// Shortest decimal that parses back to exactly the same double; shared by
// every CSV writer.
std::string format_double(double v);

struct PredictionRow {
  double angle_deg = 0.0;
  double a_dot_b = 0.0;
  double value = 0.0;
};

std::vector<PredictionRow> predict_rows(const ExperimentConfig& cfg, PredictionModel model);

struct RenderedOutputs {
  std::string csv;
  std::string json;
};

// Executes the run a manifest describes: the rendered outputs plus the typed
// result for whichever subcommand ran. Every front end goes through this one
// path, which is what makes a rerun from a stored manifest byte-identical to
// the original run.
struct RunOutcome {
  RenderedOutputs rendered;
  std::optional<CorrelationReport> correlation;
  std::optional<std::vector<PredictionRow>> prediction;
  std::optional<ChshScanResult> chsh;
};

RunOutcome execute_run(const RunManifest& manifest);

inline RenderedOutputs render_run(const RunManifest& manifest) {
  return execute_run(manifest).rendered;
}

RenderedOutputs render_correlation(const RunManifest& manifest, const CorrelationReport& report);
RenderedOutputs render_prediction(const RunManifest& manifest,
                                  const std::vector<PredictionRow>& rows);
RenderedOutputs render_chsh(const RunManifest& manifest, const ChshScanResult& result);

// Multivector <-> JSON coefficient array, bit-exact round trip.
ordered_json multivector_to_json(const Multivector& m);
Multivector multivector_from_json(const ordered_json& j);

}  // namespace bellsim
