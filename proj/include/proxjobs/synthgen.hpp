#ifndef PROXJOBS_SYNTHGEN_HPP
#define PROXJOBS_SYNTHGEN_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "proxjobs/data_io.hpp"
#include "proxjobs/modelset.hpp"
#include "proxjobs/strata.hpp"

namespace proxjobs {

// Built-in per-stratum ground truth used when no spec is supplied: the
// estimated 1999 coefficients for the standard seven travel-time strata.
const std::vector<std::pair<double, double>>& default_ground_truth();

struct GeneratorSpec {
  // One (intercept, slope) pair per stratum of `strata`.
  std::vector<std::pair<double, double>> truth = default_ground_truth();
  StratumSpec strata;
  std::size_t municipalities_per_stratum = 5000;
  double population_min = 50;
  double population_max = 4999;
  double noise_mean = 0.05;  // mean of the one-sided exponential noise
  std::uint64_t seed = 1;
  std::vector<std::string> years{"1999", "2006", "2008"};
  // Upper bound for travel times drawn in the open-ended stratum.
  double open_stratum_max_minutes = 60;

  void validate() const;  // std::invalid_argument on any violation
};

// Reads a JSON document mirroring GeneratorSpec field names ("truth" as an
// array of {"intercept", "slope"}, "boundaries" for the strata). Missing
// fields keep their defaults.
GeneratorSpec load_generator_spec(const std::filesystem::path& path);

struct SyntheticDataset {
  Dataset dataset;  // integer job counts, writable via write_municipalities
  // Pre-quantization observations: year -> stratum -> (ln P, y) with
  // y = max(0, intercept + slope * ln P + noise).
  std::map<std::string, StratumObservations> exact;
};

// Deterministic for a fixed seed. Populations are log-uniform integers in
// [population_min, population_max]; travel times are uniform inside each
// stratum's half-open interval; jobs = round(y * population).
SyntheticDataset generate(const GeneratorSpec& spec);

}  // namespace proxjobs

#endif  // PROXJOBS_SYNTHGEN_HPP
