#include "proxjobs/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "proxjobs/csv.hpp"
#include "proxjobs/data_io.hpp"
#include "proxjobs/errors.hpp"
#include "proxjobs/model_json.hpp"
#include "proxjobs/modelset.hpp"
#include "proxjobs/report.hpp"
#include "proxjobs/synthgen.hpp"

namespace proxjobs::cli {

namespace {

namespace fs = std::filesystem;

enum class LogLevel { debug = 0, info, warn, error, quiet };

LogLevel log_threshold() {
  static const LogLevel level = [] {
    const char* env = std::getenv("PROXJOBS_LOG");
    if (env == nullptr) return LogLevel::info;
    const std::string v(env);
    if (v == "debug") return LogLevel::debug;
    if (v == "info") return LogLevel::info;
    if (v == "warn") return LogLevel::warn;
    if (v == "error") return LogLevel::error;
    if (v == "quiet") return LogLevel::quiet;
    return LogLevel::info;
  }();
  return level;
}

void log_at(LogLevel level, const char* tag, const std::string& msg) {
  if (level < log_threshold()) return;
  std::cerr << "[" << tag << "] " << msg << "\n";
}

void log_info(const std::string& msg) { log_at(LogLevel::info, "info", msg); }
void log_warn(const std::string& msg) { log_at(LogLevel::warn, "warn", msg); }
void log_error(const std::string& msg) {
  log_at(LogLevel::error, "error", msg);
}

// Invalid configuration, reported with exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const char* command_name(RunConfig::Command c) {
  switch (c) {
    case RunConfig::Command::generate: return "generate";
    case RunConfig::Command::fit: return "fit";
    case RunConfig::Command::predict: return "predict";
    case RunConfig::Command::compare: return "compare";
    case RunConfig::Command::report: return "report";
  }
  return "?";
}

nlohmann::json effective_config(const RunConfig& c) {
  nlohmann::json doc;
  doc["command"] = command_name(c.command);
  if (!c.input.empty()) doc["input"] = c.input;
  if (!c.model.empty()) doc["model"] = c.model;
  if (!c.models.empty()) doc["models"] = c.models;
  if (!c.output.empty()) doc["output"] = c.output;
  doc["out_dir"] = c.out_dir;
  if (!c.year.empty()) doc["year"] = c.year;
  doc["tau"] = c.tau;
  if (!c.boundaries.empty()) doc["boundaries"] = c.boundaries;
  doc["clamp"] = c.clamp;
  if (!c.populations.empty()) doc["populations"] = c.populations;
  if (c.seed_overridden) doc["seed"] = c.seed;
  if (c.count > 0) doc["count"] = c.count;
  return doc;
}

StratumSpec spec_from_config(const RunConfig& c) {
  StratumSpec spec;
  if (!c.boundaries.empty()) spec.boundaries = c.boundaries;
  spec.validate();
  return spec;
}

void validate_config(const RunConfig& c) {
  using Command = RunConfig::Command;
  if (!(c.tau > 0.0 && c.tau < 1.0)) {
    throw UsageError("--tau must lie in (0,1)");
  }
  for (double p : c.populations) {
    if (!(p >= 1.0)) throw UsageError("--populations entries must be >= 1");
  }
  switch (c.command) {
    case Command::generate:
      if (c.output.empty()) throw UsageError("generate needs --output");
      break;
    case Command::fit:
      if (c.input.empty()) throw UsageError("fit needs --input");
      if (c.year.empty()) throw UsageError("fit needs --year");
      break;
    case Command::predict:
      if (c.model.empty()) throw UsageError("predict needs --model");
      if (c.populations.empty()) throw UsageError("predict needs --populations");
      break;
    case Command::compare:
      if (c.models.empty()) throw UsageError("compare needs --models");
      if (c.populations.empty()) throw UsageError("compare needs --populations");
      break;
    case Command::report:
      if (c.input.empty()) throw UsageError("report needs --input");
      if (c.model.empty()) throw UsageError("report needs --model");
      break;
  }
  if (!c.boundaries.empty()) {
    StratumSpec spec;
    spec.boundaries = c.boundaries;
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
  if (!out) throw DataError("failed while writing " + path.string());
}

void report_observation_diagnostics(const ObservationSet& obs) {
  for (const auto& [reason, count] : obs.exclusions) {
    log_info("excluded " + std::to_string(count) + " municipalities: " +
             reason);
  }
  const std::size_t max_shown = 5;
  for (std::size_t i = 0; i < obs.warnings.size(); ++i) {
    if (i == max_shown) {
      log_warn("... " + std::to_string(obs.warnings.size() - max_shown) +
               " further warnings");
      break;
    }
    log_warn(obs.warnings[i]);
  }
}

int run_generate(const RunConfig& c) {
  GeneratorSpec spec;
  if (!c.input.empty()) spec = load_generator_spec(c.input);
  if (c.seed_overridden) spec.seed = c.seed;
  if (c.count > 0) spec.municipalities_per_stratum = c.count;
  if (!c.boundaries.empty()) {
    throw UsageError(
        "generate takes boundaries from the spec file, not --boundaries");
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const SyntheticDataset data = generate(spec);
  write_municipalities(data.dataset, c.output);
  log_info("wrote " + std::to_string(data.dataset.municipalities.size()) +
           " municipalities to " + c.output);
  return 0;
}

int run_fit(const RunConfig& c) {
  const StratumSpec spec = spec_from_config(c);
  const Dataset dataset = load_municipalities(c.input);
  for (const RowWarning& w : dataset.row_warnings) {
    log_warn(c.input + ":" + std::to_string(w.line) + ": " + w.reason +
             " (row skipped)");
  }
  const ObservationSet obs = to_observations(dataset, c.year, spec);
  report_observation_diagnostics(obs);

  const ModelSet modelset = fit_all_strata(obs.by_stratum, c.tau, c.year, spec);
  for (const auto& [stratum, reason] : modelset.skipped) {
    log_warn("stratum " + spec.label(stratum) + " skipped: " + reason);
  }
  for (const auto& [stratum, fit] : modelset.fits) {
    if (fit.small_sample) {
      log_warn("stratum " + spec.label(stratum) + ": only " +
               std::to_string(fit.n) +
               " observations; the fitted quantile degenerates to the "
               "minimum");
    }
  }
  if (modelset.fits.empty()) {
    throw DataError("no stratum could be fitted");
  }

  fs::create_directories(c.out_dir);
  const fs::path model_path = fs::path(c.out_dir) / "modelset.json";
  save_model_set(modelset, model_path);
  const TextTable table = coefficients_table(modelset);
  write_text_file(fs::path(c.out_dir) / "coefficients.csv", table.to_csv());
  std::cout << table.to_text();
  log_info("wrote " + model_path.string());
  return 0;
}

nlohmann::json rows_to_json(const ComparisonTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ComparisonRow& row : table.rows) {
    rows.push_back({{"year", row.year},
                    {"stratum", row.stratum},
                    {"label", row.label},
                    {"population", row.population},
                    {"predicted", row.clamped},
                    {"predicted_raw", row.raw}});
  }
  return rows;
}

int run_predict(const RunConfig& c) {
  const ModelSet modelset = load_model_set(c.model);
  const ComparisonTable table =
      compare_populations({modelset}, c.populations, c.clamp);
  std::string rendered;
  switch (c.format) {
    case RunConfig::Format::csv:
      rendered = comparison_rows_table(table).to_csv();
      break;
    case RunConfig::Format::json:
      rendered = rows_to_json(table).dump(2) + "\n";
      break;
    case RunConfig::Format::text:
      rendered = comparison_rows_table(table).to_text();
      break;
  }
  if (c.output.empty()) {
    std::cout << rendered;
  } else {
    write_text_file(c.output, rendered);
    log_info("wrote " + c.output);
  }
  return 0;
}

int run_compare(const RunConfig& c) {
  std::vector<ModelSet> models;
  models.reserve(c.models.size());
  for (const std::string& path : c.models) {
    models.push_back(load_model_set(path));
  }
  const ComparisonTable table =
      compare_populations(models, c.populations, c.clamp);
  fs::create_directories(c.out_dir);
  write_text_file(fs::path(c.out_dir) / "comparison.csv",
                  comparison_rows_table(table).to_csv());
  write_text_file(fs::path(c.out_dir) / "differences.csv",
                  comparison_differences_table(table).to_csv());
  write_text_file(fs::path(c.out_dir) / "profile.json",
                  tmfm_profile(table).dump(2) + "\n");
  std::cout << comparison_rows_table(table).to_text();
  log_info("wrote comparison.csv, differences.csv, profile.json to " +
           c.out_dir);
  return 0;
}

int run_report(const RunConfig& c) {
  const ModelSet modelset = load_model_set(c.model);
  const Dataset dataset = load_municipalities(c.input);
  const ObservationSet obs =
      to_observations(dataset, modelset.year, modelset.spec);
  report_observation_diagnostics(obs);

  fs::create_directories(c.out_dir);
  ScatterOptions options;
  options.line_samples = c.line_samples;
  options.clamp = c.clamp;
  std::size_t written = 0;
  for (const auto& [stratum, fit] : modelset.fits) {
    auto it = obs.by_stratum.find(stratum);
    if (it == obs.by_stratum.end() || it->second.empty()) {
      log_warn("no observations for fitted stratum " +
               modelset.spec.label(stratum) + "; scatter skipped");
      continue;
    }
    const PlotDoc doc = scatter_with_line(modelset, obs.by_stratum, stratum,
                                          options);
    const fs::path path =
        fs::path(c.out_dir) / ("scatter_stratum_" + std::to_string(stratum) +
                               ".json");
    write_text_file(path, doc.dump(2) + "\n");
    ++written;
  }
  write_text_file(fs::path(c.out_dir) / "tmfm_histogram.json",
                  tmfm_histogram(dataset).dump(2) + "\n");
  write_text_file(fs::path(c.out_dir) / "population_scatter.json",
                  population_scatter(dataset, modelset.year).dump(2) + "\n");
  log_info("wrote " + std::to_string(written) +
           " scatter documents plus histogram and population scatter to " +
           c.out_dir);
  return 0;
}

}  // namespace

int run(const RunConfig& config) {
  try {
    validate_config(config);
  } catch (const UsageError& e) {
    log_error(e.what());
    return 2;
  }
  log_info("config " + effective_config(config).dump());
  try {
    switch (config.command) {
      case RunConfig::Command::generate: return run_generate(config);
      case RunConfig::Command::fit: return run_fit(config);
      case RunConfig::Command::predict: return run_predict(config);
      case RunConfig::Command::compare: return run_compare(config);
      case RunConfig::Command::report: return run_report(config);
    }
  } catch (const UsageError& e) {
    log_error(e.what());
    return 2;
  } catch (const std::exception& e) {
    log_error(e.what());
    return 1;
  }
  return 1;
}

int main_impl(int argc, const char* const* argv) {
  CLI::App app{
      "Estimates proximity-service jobs per inhabitant in small "
      "municipalities: first-percentile quantile regressions of service "
      "jobs per inhabitant against log population, per travel-time stratum"};
  app.require_subcommand(1);

  RunConfig config;
  const std::map<std::string, RunConfig::Format> format_names{
      {"csv", RunConfig::Format::csv},
      {"json", RunConfig::Format::json},
      {"text", RunConfig::Format::text}};

  CLI::App* generate =
      app.add_subcommand("generate", "Write a synthetic census CSV");
  generate->add_option("--spec", config.input,
                       "Generator spec JSON (defaults apply when omitted)");
  generate->add_option("--seed", config.seed, "Override the generator seed");
  generate->add_option("--count", config.count,
                       "Override municipalities per stratum");
  generate->add_option("--output", config.output, "Output CSV path")
      ->required();

  CLI::App* fit = app.add_subcommand(
      "fit", "Fit per-stratum quantile regressions from a census CSV");
  fit->add_option("--input", config.input, "Census CSV")->required();
  fit->add_option("--year", config.year, "Census year tag, e.g. 1999")
      ->required();
  fit->add_option("--tau", config.tau, "Quantile level (default 0.01)");
  fit->add_option("--boundaries", config.boundaries,
                  "Stratum boundaries in minutes, e.g. 0,5,10,15,20,25,30")
      ->delimiter(',');
  fit->add_option("--out-dir", config.out_dir,
                  "Directory for modelset.json and coefficients.csv");

  CLI::App* predict = app.add_subcommand(
      "predict", "Evaluate a fitted model set at given populations");
  predict->add_option("--model", config.model, "Model set JSON")->required();
  predict->add_option("--populations", config.populations,
                      "Populations, e.g. 500,3000")
      ->delimiter(',')
      ->required();
  predict->add_flag("--raw", "Report raw values (no clamping at zero)");
  predict->add_option("--output", config.output,
                      "Output file (stdout when omitted)");
  predict->add_option("--format", config.format, "csv, json or text")
      ->transform(CLI::CheckedTransformer(format_names, CLI::ignore_case));

  CLI::App* compare = app.add_subcommand(
      "compare", "Join model sets into a comparison table and profile plot");
  compare->add_option("--models", config.models, "Model set JSON files")
      ->delimiter(',')
      ->required();
  compare->add_option("--populations", config.populations,
                      "Populations, e.g. 500,3000")
      ->delimiter(',')
      ->required();
  compare->add_flag("--raw", "Use raw values (no clamping at zero)");
  compare->add_option("--out-dir", config.out_dir, "Artifact directory");

  CLI::App* report = app.add_subcommand(
      "report", "Emit per-stratum scatter/fit plot data for a fitted model");
  report->add_option("--input", config.input, "Census CSV")->required();
  report->add_option("--model", config.model, "Model set JSON")->required();
  report->add_option("--samples", config.line_samples,
                     "Fitted-line sample count (default 64)");
  report->add_flag("--raw", "Draw the raw fitted line (no clamping)");
  report->add_option("--out-dir", config.out_dir, "Artifact directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (generate->parsed()) {
    config.command = RunConfig::Command::generate;
    config.seed_overridden = generate->count("--seed") > 0;
  } else if (fit->parsed()) {
    config.command = RunConfig::Command::fit;
  } else if (predict->parsed()) {
    config.command = RunConfig::Command::predict;
    config.clamp = predict->count("--raw") == 0;
  } else if (compare->parsed()) {
    config.command = RunConfig::Command::compare;
    config.clamp = compare->count("--raw") == 0;
  } else if (report->parsed()) {
    config.command = RunConfig::Command::report;
    config.clamp = report->count("--raw") == 0;
  }
  return run(config);
}

}  // namespace proxjobs::cli
