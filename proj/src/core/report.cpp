#include "core/report.hpp"

#include <array>
#include <charconv>
#include <string_view>
#include <utility>

#include "core/bell.hpp"
#include "core/error.hpp"
#include "core/parallel.hpp"

namespace bellsim {
namespace {

constexpr std::string_view kManifestPrefix = "# manifest: ";

ordered_json unit_vector_json(const UnitVector& v) {
  return ordered_json::array({v.x(), v.y(), v.z()});
}

std::string model_column(PredictionModel model) {
  return model == PredictionModel::Linear ? "E_linear_eq3" : "E_cosine_eq5";
}

std::string manifest_line(const RunManifest& manifest) {
  return std::string(kManifestPrefix) + manifest_to_json(manifest).dump() + "\n";
}

CorrelationSource build_source(const RunManifest& manifest) {
  switch (*manifest.source) {
    case CorrelationSource::Kind::AnalyticLinear:
      return CorrelationSource::linear();
    case CorrelationSource::Kind::AnalyticCosine:
      return CorrelationSource::cosine();
    case CorrelationSource::Kind::Empirical: {
      const RecordedEnsemble ensemble = generate_ensemble(manifest.config);
      return CorrelationSource::empirical(ensemble.shared_lambdas(),
                                          manifest.config.effective_tie_epsilon(),
                                          resolve_thread_count(manifest.config.threads));
    }
    case CorrelationSource::Kind::Custom:
      break;
  }
  throw DomainError("a custom correlation source cannot appear in a manifest");
}

}  // namespace

std::string to_string(DirectionMode mode) {
  return mode == DirectionMode::Continuous ? "continuous" : "discrete";
}

std::string to_string(LatticeKind kind) {
  return kind == LatticeKind::Fibonacci ? "fibonacci" : "octahedral";
}

std::string to_string(PredictionModel model) {
  return model == PredictionModel::Linear ? "linear" : "cosine";
}

std::string to_string(CorrelationSource::Kind kind) {
  switch (kind) {
    case CorrelationSource::Kind::AnalyticLinear:
      return "linear";
    case CorrelationSource::Kind::AnalyticCosine:
      return "cosine";
    case CorrelationSource::Kind::Empirical:
      return "empirical";
    case CorrelationSource::Kind::Custom:
      break;
  }
  return "custom";
}

DirectionMode direction_mode_from_string(const std::string& s) {
  if (s == "continuous") return DirectionMode::Continuous;
  if (s == "discrete") return DirectionMode::Discrete;
  throw DomainError("unknown direction mode: " + s);
}

LatticeKind lattice_kind_from_string(const std::string& s) {
  if (s == "fibonacci") return LatticeKind::Fibonacci;
  if (s == "octahedral") return LatticeKind::Octahedral;
  throw DomainError("unknown lattice kind: " + s);
}

PredictionModel prediction_model_from_string(const std::string& s) {
  if (s == "linear") return PredictionModel::Linear;
  if (s == "cosine") return PredictionModel::Cosine;
  throw DomainError("unknown prediction model: " + s);
}

CorrelationSource::Kind source_kind_from_string(const std::string& s) {
  if (s == "linear") return CorrelationSource::Kind::AnalyticLinear;
  if (s == "cosine") return CorrelationSource::Kind::AnalyticCosine;
  if (s == "empirical") return CorrelationSource::Kind::Empirical;
  throw DomainError("unknown correlation source: " + s);
}

RunManifest make_simulate_manifest(const ExperimentConfig& cfg) {
  RunManifest manifest;
  manifest.subcommand = "simulate";
  manifest.config = cfg;
  return manifest;
}

RunManifest make_predict_manifest(const ExperimentConfig& cfg, PredictionModel model) {
  RunManifest manifest;
  manifest.subcommand = "predict";
  manifest.config = cfg;
  manifest.model = model;
  return manifest;
}

RunManifest make_chsh_manifest(const ExperimentConfig& cfg, CorrelationSource::Kind source,
                               double step_deg, bool refine) {
  RunManifest manifest;
  manifest.subcommand = "chsh";
  manifest.config = cfg;
  manifest.source = source;
  manifest.step_deg = step_deg;
  manifest.refine = refine;
  return manifest;
}

ordered_json manifest_to_json(const RunManifest& manifest) {
  ordered_json j;
  j["subcommand"] = manifest.subcommand;
  j["version"] = manifest.version;
  if (manifest.config.timestamp_utc) {
    j["timestamp_utc"] = *manifest.config.timestamp_utc;
  } else {
    j["timestamp_utc"] = nullptr;
  }

  ordered_json cfg;
  cfg["trials"] = manifest.config.trials;
  cfg["master_seed"] = manifest.config.master_seed;
  cfg["settings_seed"] = manifest.config.settings_seed;
  cfg["mode"] = to_string(manifest.config.mode);
  cfg["lattice"] = to_string(manifest.config.lattice);
  cfg["lattice_size"] = manifest.config.lattice_size;
  cfg["angles_deg"] = manifest.config.angles_deg;
  cfg["tie_epsilon"] = manifest.config.tie_epsilon;
  j["config"] = std::move(cfg);

  ordered_json params = ordered_json::object();
  if (manifest.model) params["model"] = to_string(*manifest.model);
  if (manifest.source) params["source"] = to_string(*manifest.source);
  if (manifest.step_deg) params["step_deg"] = *manifest.step_deg;
  if (manifest.refine.has_value()) params["refine"] = *manifest.refine;
  j["params"] = std::move(params);
  return j;
}

RunManifest manifest_from_json(const ordered_json& j) {
  try {
    RunManifest manifest;
    manifest.subcommand = j.at("subcommand").get<std::string>();
    manifest.version = j.at("version").get<std::string>();
    const auto& timestamp = j.at("timestamp_utc");
    if (!timestamp.is_null()) {
      manifest.config.timestamp_utc = timestamp.get<std::string>();
    }

    const auto& cfg = j.at("config");
    manifest.config.trials = cfg.at("trials").get<std::uint64_t>();
    manifest.config.master_seed = cfg.at("master_seed").get<std::uint64_t>();
    manifest.config.settings_seed = cfg.at("settings_seed").get<std::uint64_t>();
    manifest.config.mode = direction_mode_from_string(cfg.at("mode").get<std::string>());
    manifest.config.lattice = lattice_kind_from_string(cfg.at("lattice").get<std::string>());
    manifest.config.lattice_size = cfg.at("lattice_size").get<std::uint64_t>();
    manifest.config.angles_deg = cfg.at("angles_deg").get<std::vector<double>>();
    manifest.config.tie_epsilon = cfg.at("tie_epsilon").get<double>();

    const auto& params = j.at("params");
    if (params.contains("model")) {
      manifest.model = prediction_model_from_string(params.at("model").get<std::string>());
    }
    if (params.contains("source")) {
      manifest.source = source_kind_from_string(params.at("source").get<std::string>());
    }
    if (params.contains("step_deg")) manifest.step_deg = params.at("step_deg").get<double>();
    if (params.contains("refine")) manifest.refine = params.at("refine").get<bool>();
    return manifest;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed manifest: ") + e.what());
  }
}

RunManifest manifest_from_output(const std::string& content) {
  try {
    if (content.rfind(kManifestPrefix, 0) == 0) {
      const auto eol = content.find('\n');
      const std::string line =
          content.substr(kManifestPrefix.size(),
                         eol == std::string::npos ? std::string::npos
                                                  : eol - kManifestPrefix.size());
      return manifest_from_json(ordered_json::parse(line));
    }
    const ordered_json doc = ordered_json::parse(content);
    if (!doc.contains("manifest")) {
      throw DomainError("output has no manifest member");
    }
    return manifest_from_json(doc.at("manifest"));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("cannot recover a manifest from this output: ") + e.what());
  }
}

std::string format_double(double v) {
  std::array<char, 64> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::vector<PredictionRow> predict_rows(const ExperimentConfig& cfg, PredictionModel model) {
  cfg.validate();
  std::vector<PredictionRow> rows;
  rows.reserve(cfg.angles_deg.size());
  const UnitVector a = UnitVector::z_axis();
  for (const double angle : cfg.angles_deg) {
    const UnitVector b = coplanar_direction(angle);
    PredictionRow row;
    row.angle_deg = angle;
    row.a_dot_b = dot(a, b);
    row.value = model == PredictionModel::Linear ? analytic_correlation_linear(a, b)
                                                 : analytic_correlation_cosine(a, b);
    rows.push_back(row);
  }
  return rows;
}

RenderedOutputs render_correlation(const RunManifest& manifest,
                                   const CorrelationReport& report) {
  RenderedOutputs out;

  out.csv = manifest_line(manifest);
  out.csv += "angle_deg,a_dot_b,E_empirical,E_linear_eq3,E_cosine_eq5,std_error,trials\n";
  for (const auto& row : report.rows) {
    out.csv += format_double(row.angle_deg);
    out.csv += ',';
    out.csv += format_double(row.a_dot_b);
    out.csv += ',';
    out.csv += format_double(row.empirical);
    out.csv += ',';
    out.csv += format_double(row.linear_prediction);
    out.csv += ',';
    out.csv += format_double(row.cosine_prediction);
    out.csv += ',';
    out.csv += format_double(row.standard_error);
    out.csv += ',';
    out.csv += std::to_string(row.trials);
    out.csv += '\n';
  }

  ordered_json doc;
  doc["manifest"] = manifest_to_json(manifest);
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json r;
    r["angle_deg"] = row.angle_deg;
    r["a_dot_b"] = row.a_dot_b;
    r["E_empirical"] = row.empirical;
    r["E_linear_eq3"] = row.linear_prediction;
    r["E_cosine_eq5"] = row.cosine_prediction;
    r["std_error"] = row.standard_error;
    r["trials"] = row.trials;
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  ordered_json summary;
  summary["max_abs_dev_linear"] = report.summary.max_abs_dev_linear;
  summary["max_abs_dev_cosine"] = report.summary.max_abs_dev_cosine;
  summary["max_dev_linear_in_se"] = report.summary.max_dev_linear_in_se;
  summary["max_dev_cosine_in_se"] = report.summary.max_dev_cosine_in_se;
  doc["summary"] = std::move(summary);
  out.json = doc.dump(2) + "\n";
  return out;
}

RenderedOutputs render_prediction(const RunManifest& manifest,
                                  const std::vector<PredictionRow>& rows) {
  if (!manifest.model) throw DomainError("prediction output needs a model in the manifest");
  const std::string column = model_column(*manifest.model);

  RenderedOutputs out;
  out.csv = manifest_line(manifest);
  out.csv += "angle_deg,a_dot_b," + column + "\n";
  for (const auto& row : rows) {
    out.csv += format_double(row.angle_deg);
    out.csv += ',';
    out.csv += format_double(row.a_dot_b);
    out.csv += ',';
    out.csv += format_double(row.value);
    out.csv += '\n';
  }

  ordered_json doc;
  doc["manifest"] = manifest_to_json(manifest);
  ordered_json json_rows = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json r;
    r["angle_deg"] = row.angle_deg;
    r["a_dot_b"] = row.a_dot_b;
    r[column] = row.value;
    json_rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(json_rows);
  out.json = doc.dump(2) + "\n";
  return out;
}

RenderedOutputs render_chsh(const RunManifest& manifest, const ChshScanResult& result) {
  if (!manifest.source) throw DomainError("CHSH output needs a source in the manifest");
  const std::string source_name = to_string(*manifest.source);

  RenderedOutputs out;
  out.csv = manifest_line(manifest);
  out.csv +=
      "source,value,max_abs,a_deg,a_prime_deg,b_deg,b_prime_deg,"
      "E_ab,E_ab_prime,E_a_prime_b,E_a_prime_b_prime,"
      "se_ab,se_ab_prime,se_a_prime_b,se_a_prime_b_prime,"
      "combined_se,grid_max_abs,max_bound_margin\n";
  out.csv += source_name;
  out.csv += ',';
  out.csv += format_double(result.value);
  out.csv += ',';
  out.csv += format_double(result.max_abs);
  for (const double angle : result.angles_deg) {
    out.csv += ',';
    out.csv += format_double(angle);
  }
  for (const double term : result.term_values) {
    out.csv += ',';
    out.csv += format_double(term);
  }
  for (const double se : result.term_standard_errors) {
    out.csv += ',';
    out.csv += format_double(se);
  }
  out.csv += ',';
  out.csv += format_double(result.combined_standard_error);
  out.csv += ',';
  out.csv += format_double(result.grid_max_abs);
  out.csv += ',';
  out.csv += format_double(result.max_bound_margin);
  out.csv += '\n';

  ordered_json doc;
  doc["manifest"] = manifest_to_json(manifest);
  ordered_json res;
  res["source"] = source_name;
  res["angles_deg"] = result.angles_deg;
  ordered_json settings;
  settings["a"] = unit_vector_json(result.settings.a);
  settings["a_prime"] = unit_vector_json(result.settings.a_prime);
  settings["b"] = unit_vector_json(result.settings.b);
  settings["b_prime"] = unit_vector_json(result.settings.b_prime);
  res["settings"] = std::move(settings);
  res["value"] = result.value;
  res["max_abs"] = result.max_abs;
  res["term_values"] = result.term_values;
  res["term_standard_errors"] = result.term_standard_errors;
  res["combined_standard_error"] = result.combined_standard_error;
  res["grid_max_abs"] = result.grid_max_abs;
  res["max_bound_margin"] = result.max_bound_margin;
  doc["result"] = std::move(res);
  out.json = doc.dump(2) + "\n";
  return out;
}

RunOutcome execute_run(const RunManifest& manifest) {
  manifest.config.validate();
  RunOutcome outcome;
  if (manifest.subcommand == "simulate") {
    outcome.correlation = compare_predictions(manifest.config);
    outcome.rendered = render_correlation(manifest, *outcome.correlation);
    return outcome;
  }
  if (manifest.subcommand == "predict") {
    if (!manifest.model) throw DomainError("predict manifest has no model parameter");
    outcome.prediction = predict_rows(manifest.config, *manifest.model);
    outcome.rendered = render_prediction(manifest, *outcome.prediction);
    return outcome;
  }
  if (manifest.subcommand == "chsh") {
    if (!manifest.source || !manifest.step_deg || !manifest.refine.has_value()) {
      throw DomainError("chsh manifest is missing source, step_deg, or refine");
    }
    ScanSpec spec = ScanSpec::with_step(*manifest.step_deg);
    spec.refine = *manifest.refine;
    const CorrelationSource source = build_source(manifest);
    outcome.chsh = max_abs_chsh(source, spec, manifest.config.threads);
    outcome.rendered = render_chsh(manifest, *outcome.chsh);
    return outcome;
  }
  throw DomainError("unknown subcommand in manifest: " + manifest.subcommand);
}

ordered_json multivector_to_json(const Multivector& m) {
  ordered_json arr = ordered_json::array();
  for (std::size_t i = 0; i < 8; ++i) arr.push_back(m[i]);
  return arr;
}

Multivector multivector_from_json(const ordered_json& j) {
  if (!j.is_array() || j.size() != 8) {
    throw DomainError("a multivector serializes as an array of 8 coefficients");
  }
  Multivector m;
  for (std::size_t i = 0; i < 8; ++i) {
    if (!j.at(i).is_number()) {
      throw DomainError("a multivector serializes as an array of 8 coefficients");
    }
    m[i] = j.at(i).get<double>();
  }
  return m;
}

}  // namespace bellsim
