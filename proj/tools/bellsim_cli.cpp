#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <bellsim.h>

namespace {

struct Failure {
  int exit_code;
  std::string message;
};

struct ConfigDeleter {
  void operator()(bellsim_config* cfg) const { bellsim_config_free(cfg); }
};
struct ReportDeleter {
  void operator()(bellsim_report* report) const { bellsim_report_free(report); }
};
using ConfigHandle = std::unique_ptr<bellsim_config, ConfigDeleter>;
using ReportHandle = std::unique_ptr<bellsim_report, ReportDeleter>;

struct OwnedString {
  char* value = nullptr;
  ~OwnedString() { bellsim_string_free(value); }
  std::string str() const { return value ? std::string(value) : std::string(); }
};

void check(bellsim_status status) {
  if (status != BELLSIM_OK) {
    throw Failure{1, bellsim_last_error()};
  }
}

double parse_number(const std::string& text) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  double value = 0.0;
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end) {
    throw Failure{2, "not a number: '" + text + "'"};
  }
  return value;
}

// Angle lists accept plain numbers and start..end:step ranges (step defaults
// to 1), e.g. "0,30,60" or "0..180:15" or "0,45..90:15,180".
std::vector<double> parse_angles(const std::vector<std::string>& items) {
  std::vector<double> angles;
  for (const std::string& item : items) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      angles.push_back(parse_number(item));
      continue;
    }
    const double start = parse_number(item.substr(0, dots));
    std::string rest = item.substr(dots + 2);
    double step = 1.0;
    const auto colon = rest.find(':');
    if (colon != std::string::npos) {
      step = parse_number(rest.substr(colon + 1));
      rest = rest.substr(0, colon);
    }
    const double stop = parse_number(rest);
    if (!(step > 0.0)) {
      throw Failure{2, "angle range step must be positive: '" + item + "'"};
    }
    if (stop < start) {
      throw Failure{2, "angle range end is before its start: '" + item + "'"};
    }
    for (int i = 0;; ++i) {
      const double angle = start + step * i;
      if (angle > stop + 1e-9) break;
      angles.push_back(angle);
    }
  }
  return angles;
}

struct CommonOptions {
  std::uint64_t trials = 1000000;
  std::uint64_t seed = 1;
  std::uint64_t settings_seed = 1;
  std::string mode = "continuous";
  std::uint64_t lattice_size = 1000000;
  std::string lattice = "fibonacci";
  std::vector<std::string> angle_items;
  double tie_epsilon = 0.0;
  unsigned threads = 0;
  std::string timestamp;

  std::string output;
  std::string format;
};

void add_common_options(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--trials", opt.trials, "Number of trials in the ensemble")
      ->capture_default_str();
  cmd->add_option("--seed", opt.seed, "Master seed for the hidden-direction ensemble")
      ->capture_default_str();
  cmd->add_option("--settings-seed", opt.settings_seed,
                  "Seed for the independent detector-settings stream")
      ->capture_default_str();
  cmd->add_option("--mode", opt.mode, "Hidden-direction sampling mode")
      ->check(CLI::IsMember({"continuous", "discrete"}))
      ->capture_default_str();
  cmd->add_option("--lattice-size", opt.lattice_size,
                  "Number of lattice directions in discrete mode")
      ->capture_default_str();
  cmd->add_option("--lattice", opt.lattice, "Direction lattice used in discrete mode")
      ->check(CLI::IsMember({"fibonacci", "octahedral"}))
      ->capture_default_str();
  cmd->add_option("--angles", opt.angle_items,
                  "Angles in degrees: numbers and start..end:step ranges")
      ->delimiter(',');
  cmd->add_option("--tie-epsilon", opt.tie_epsilon,
                  "Dot-product magnitude treated as a tie (discrete mode)")
      ->capture_default_str();
  cmd->add_option("--threads", opt.threads, "Worker threads, 0 = auto; never changes results")
      ->capture_default_str();
  cmd->add_option("--timestamp", opt.timestamp,
                  "UTC timestamp recorded in the manifest (omitted: null, runs stay "
                  "byte-reproducible)");
  cmd->add_option("--output", opt.output,
                  "Output path; .csv or .json picks one format, otherwise both are written");
  cmd->add_option("--format", opt.format, "Output format (default csv on stdout)")
      ->check(CLI::IsMember({"csv", "json"}));
}

ConfigHandle build_config(const CommonOptions& opt) {
  ConfigHandle cfg(bellsim_config_new());
  if (!cfg) throw Failure{1, "cannot allocate a configuration"};
  check(bellsim_config_set_trials(cfg.get(), opt.trials));
  check(bellsim_config_set_seeds(cfg.get(), opt.seed, opt.settings_seed));
  check(bellsim_config_set_mode(
      cfg.get(), opt.mode == "discrete" ? BELLSIM_MODE_DISCRETE : BELLSIM_MODE_CONTINUOUS));
  check(bellsim_config_set_lattice(cfg.get(),
                                   opt.lattice == "octahedral" ? BELLSIM_LATTICE_OCTAHEDRAL
                                                               : BELLSIM_LATTICE_FIBONACCI,
                                   opt.lattice_size));
  if (!opt.angle_items.empty()) {
    const std::vector<double> angles = parse_angles(opt.angle_items);
    check(bellsim_config_set_angles(cfg.get(), angles.data(), angles.size()));
  }
  check(bellsim_config_set_tie_epsilon(cfg.get(), opt.tie_epsilon));
  check(bellsim_config_set_threads(cfg.get(), opt.threads));
  if (!opt.timestamp.empty()) {
    check(bellsim_config_set_timestamp(cfg.get(), opt.timestamp.c_str()));
  }
  return cfg;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw Failure{1, "cannot write " + path};
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void emit(const std::string& csv, const std::string& json, const CommonOptions& opt) {
  if (opt.output.empty()) {
    std::cout << (opt.format == "json" ? json : csv);
    return;
  }
  if (ends_with(opt.output, ".csv")) {
    if (opt.format == "json") throw Failure{2, "--format json conflicts with a .csv output"};
    write_file(opt.output, csv);
    return;
  }
  if (ends_with(opt.output, ".json")) {
    if (opt.format == "csv") throw Failure{2, "--format csv conflicts with a .json output"};
    write_file(opt.output, json);
    return;
  }
  if (opt.format.empty() || opt.format == "csv") write_file(opt.output + ".csv", csv);
  if (opt.format.empty() || opt.format == "json") write_file(opt.output + ".json", json);
}

void emit_report(const ReportHandle& report, const CommonOptions& opt) {
  OwnedString csv;
  OwnedString json;
  check(bellsim_report_csv(report.get(), &csv.value));
  check(bellsim_report_json(report.get(), &json.value));
  emit(csv.str(), json.str(), opt);
}

int run_predict(const CommonOptions& opt, const std::string& model) {
  const ConfigHandle cfg = build_config(opt);
  bellsim_report* raw = nullptr;
  check(bellsim_predict(cfg.get(),
                        model == "cosine" ? BELLSIM_MODEL_COSINE : BELLSIM_MODEL_LINEAR, &raw));
  const ReportHandle report(raw);
  emit_report(report, opt);
  return 0;
}

int run_simulate(const CommonOptions& opt) {
  const ConfigHandle cfg = build_config(opt);
  bellsim_report* raw = nullptr;
  check(bellsim_simulate(cfg.get(), &raw));
  const ReportHandle report(raw);
  emit_report(report, opt);
  return 0;
}

int run_chsh(const CommonOptions& opt, const std::string& source, double step, bool refine) {
  const ConfigHandle cfg = build_config(opt);
  bellsim_source kind = BELLSIM_SOURCE_COSINE;
  if (source == "linear") kind = BELLSIM_SOURCE_LINEAR;
  if (source == "empirical") kind = BELLSIM_SOURCE_EMPIRICAL;
  bellsim_report* raw = nullptr;
  check(bellsim_chsh_scan(cfg.get(), kind, step, refine ? 1 : 0, &raw));
  const ReportHandle report(raw);
  emit_report(report, opt);
  return 0;
}

int run_algebra_check(std::uint64_t count, std::uint64_t seed, double tolerance,
                      const std::string& output) {
  OwnedString json;
  const bellsim_status status = bellsim_algebra_check(count, seed, tolerance, &json.value);
  if (status != BELLSIM_OK && status != BELLSIM_ERR_CHECK_FAILED) {
    throw Failure{1, bellsim_last_error()};
  }
  if (output.empty()) {
    std::cout << json.str();
  } else {
    write_file(output, json.str());
  }
  if (status == BELLSIM_ERR_CHECK_FAILED) {
    throw Failure{1, bellsim_last_error()};
  }
  return 0;
}

int run_rerun(const std::string& from, const CommonOptions& opt) {
  std::ifstream in(from, std::ios::binary);
  if (!in) throw Failure{1, "cannot read " + from};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  bellsim_report* raw = nullptr;
  check(bellsim_rerun(buffer.str().c_str(), &raw));
  const ReportHandle report(raw);
  emit_report(report, opt);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Two-station spin correlations from shared hidden directions: analytic "
      "predictions, seeded ensemble runs, and CHSH scans"};
  app.set_version_flag("--version", bellsim_version());
  app.require_subcommand(1);

  CommonOptions predict_opt;
  std::string predict_model = "linear";
  CLI::App* predict = app.add_subcommand("predict", "Analytic correlation table");
  add_common_options(predict, predict_opt);
  predict->add_option("--model", predict_model, "Correlation model")
      ->check(CLI::IsMember({"linear", "cosine"}))
      ->capture_default_str();

  CommonOptions simulate_opt;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Record an ensemble, then estimate E at each angle");
  add_common_options(simulate, simulate_opt);

  CommonOptions chsh_opt;
  std::string chsh_source = "cosine";
  double chsh_step = 1.0;
  bool chsh_refine = true;
  CLI::App* chsh = app.add_subcommand("chsh", "Scan detector settings for maximal |CHSH|");
  add_common_options(chsh, chsh_opt);
  chsh->add_option("--source", chsh_source, "Correlation source the scan evaluates")
      ->check(CLI::IsMember({"linear", "cosine", "empirical"}))
      ->capture_default_str();
  chsh->add_option("--step", chsh_step, "Grid step in degrees")->capture_default_str();
  chsh->add_flag("--refine,!--no-refine", chsh_refine,
                 "Polish the grid maximum (analytic sources)");

  std::uint64_t check_count = 10000;
  std::uint64_t check_seed = 1;
  double check_tolerance = 1e-12;
  std::string check_output;
  CLI::App* algebra = app.add_subcommand("algebra-check", "Randomized kernel identity checks");
  algebra->add_option("--count", check_count, "Cases per identity family")
      ->capture_default_str();
  algebra->add_option("--seed", check_seed, "Seed for the check streams")
      ->capture_default_str();
  algebra->add_option("--tolerance", check_tolerance, "Largest accepted deviation")
      ->capture_default_str();
  algebra->add_option("--output", check_output, "Write the JSON report here instead of stdout");

  CommonOptions rerun_opt;
  std::string rerun_from;
  CLI::App* rerun = app.add_subcommand(
      "rerun", "Re-execute the run recorded in an output file's manifest");
  rerun->add_option("--from", rerun_from, "Previously written CSV or JSON output")->required();
  rerun->add_option("--output", rerun_opt.output,
                    "Output path; .csv or .json picks one format, otherwise both are written");
  rerun->add_option("--format", rerun_opt.format, "Output format (default csv on stdout)")
      ->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (predict->parsed()) return run_predict(predict_opt, predict_model);
    if (simulate->parsed()) return run_simulate(simulate_opt);
    if (chsh->parsed()) return run_chsh(chsh_opt, chsh_source, chsh_step, chsh_refine);
    if (algebra->parsed()) {
      return run_algebra_check(check_count, check_seed, check_tolerance, check_output);
    }
    if (rerun->parsed()) return run_rerun(rerun_from, rerun_opt);
  } catch (const Failure& failure) {
    std::cerr << "error: " << failure.message << "\n";
    return failure.exit_code;
  }
  return 0;
}
