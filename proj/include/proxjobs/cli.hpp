#ifndef PROXJOBS_CLI_HPP
#define PROXJOBS_CLI_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace proxjobs::cli {

struct RunConfig {
  enum class Command { generate, fit, predict, compare, report };
  enum class Format { csv, json, text };

  Command command = Command::fit;
  std::string input;                // census CSV (fit/report), spec JSON (generate)
  std::string model;                // model set JSON (predict/report)
  std::vector<std::string> models;  // model set JSONs (compare)
  std::string output;               // output file (generate/predict)
  std::string out_dir = ".";        // artifact directory (fit/compare/report)
  std::string year;
  double tau = 0.01;
  std::vector<double> boundaries;  // stratum override; empty = default bands
  bool clamp = true;
  std::vector<double> populations;
  std::uint64_t seed = 0;
  bool seed_overridden = false;
  std::size_t count = 0;  // generate: municipalities per stratum (0 = spec)
  std::size_t line_samples = 64;
  Format format = Format::text;
};

// Executes one subcommand. Returns 0 on success, 1 on data/runtime errors,
// 2 on an invalid configuration; never throws.
int run(const RunConfig& config);

// Parses argv and dispatches to run(). Same exit codes; parse errors are 2.
int main_impl(int argc, const char* const* argv);

}  // namespace proxjobs::cli

#endif  // PROXJOBS_CLI_HPP
