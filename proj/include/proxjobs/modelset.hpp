#ifndef PROXJOBS_MODELSET_HPP
#define PROXJOBS_MODELSET_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "proxjobs/quantreg.hpp"
#include "proxjobs/strata.hpp"

namespace proxjobs {

// Per-stratum observation lists, keyed by stratum index.
using StratumObservations = std::map<std::size_t, std::vector<Observation>>;

// The per-stratum fits for one census year. Every stratum of the spec is
// either in `fits` or in `skipped` (with the reason), never both.
struct ModelSet {
  std::string year;
  double tau = 0.01;
  StratumSpec spec;
  std::map<std::size_t, QuantileFit> fits;
  std::map<std::size_t, std::string> skipped;

  StratumId id_of(std::size_t index) const {
    return StratumId{index, spec.label(index)};
  }
};

// Fits every stratum independently. Strata with fewer than two usable
// observations or a degenerate design are recorded in `skipped` instead of
// aborting the run.
ModelSet fit_all_strata(const StratumObservations& observations, double tau,
                        const std::string& year,
                        const StratumSpec& spec = StratumSpec{});

// Builds a ModelSet directly from known (intercept, slope) pairs, one per
// stratum. Useful for evaluating published coefficient tables; the fits
// carry no observations (n = 0).
ModelSet model_set_from_coefficients(
    const std::string& year, double tau,
    const std::vector<std::pair<double, double>>& intercept_slope,
    const StratumSpec& spec = StratumSpec{});

struct ComparisonRow {
  std::string year;
  std::size_t stratum = 0;
  std::string label;
  double population = 0.0;
  double raw = 0.0;      // intercept + slope * ln(population)
  double clamped = 0.0;  // max(raw, 0)
};

struct StratumDifference {
  std::string year;
  double population = 0.0;
  std::size_t stratum_a = 0;
  std::size_t stratum_b = 0;
  double difference = 0.0;  // prediction(a) - prediction(b)
};

// Predictions for each (year, stratum, population) plus all pairwise
// stratum differences per year and population.
struct ComparisonTable {
  StratumSpec spec;
  bool clamp = true;  // whether differences use clamped predictions
  std::vector<std::string> years;
  std::vector<double> populations;
  std::vector<ComparisonRow> rows;
  std::vector<StratumDifference> differences;

  // nullptr when the stratum was skipped in that year's model.
  const ComparisonRow* find(const std::string& year, std::size_t stratum,
                            double population) const;
  // Throws std::out_of_range when either stratum has no prediction.
  double difference(const std::string& year, double population,
                    std::size_t stratum_a, std::size_t stratum_b) const;
};

// Evaluates every model at every population. All model sets must share the
// same stratum boundaries (IncompatibleModelsError otherwise); populations
// must be non-empty and >= 1.
ComparisonTable compare_populations(const std::vector<ModelSet>& models,
                                    const std::vector<double>& populations,
                                    bool clamp = true);

}  // namespace proxjobs

#endif  // PROXJOBS_MODELSET_HPP
