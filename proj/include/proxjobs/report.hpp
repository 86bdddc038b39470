#ifndef PROXJOBS_REPORT_HPP
#define PROXJOBS_REPORT_HPP

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "proxjobs/data_io.hpp"
#include "proxjobs/modelset.hpp"

namespace proxjobs {

// A rendered table: string cells, exportable as CSV or aligned text.
struct TextTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
  std::string to_text() const;  // aligned, space-padded columns
};

// Plot-ready data. Serializes as
//   { "series": [ { "name": str, "x": [...], "y": [...], "meta": {...} } ] }
struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  nlohmann::json meta = nlohmann::json::object();
};

struct PlotDoc {
  std::vector<PlotSeries> series;

  nlohmann::json to_json() const;
  std::string dump(int indent = 2) const;
};

// One row per stratum: label, intercept and slope rounded to three
// decimals, n, and a note (skip reason or small-sample warning). Throws
// std::invalid_argument when the model set has no fit at all.
TextTable coefficients_table(const ModelSet& modelset);

// Prediction rows and pairwise stratum differences of a ComparisonTable.
TextTable comparison_rows_table(const ComparisonTable& table);
TextTable comparison_differences_table(const ComparisonTable& table);

struct ScatterOptions {
  std::size_t line_samples = 64;
  bool clamp = true;  // floor the fitted line at zero
};

// Two series for one stratum: the (population, jobs-per-inhabitant) scatter
// and the fitted line sampled at log-spaced populations across the observed
// range. Throws IncompatibleModelsError when the stratum is missing on
// either side.
PlotDoc scatter_with_line(const ModelSet& modelset,
                          const StratumObservations& observations,
                          std::size_t stratum_index,
                          const ScatterOptions& options = {});

// One series per (year, population): predicted jobs per inhabitant against
// stratum index.
PlotDoc tmfm_profile(const ComparisonTable& comparison);

// Binned counts of travel times (descriptive companion plot).
PlotDoc tmfm_histogram(const Dataset& dataset, double bin_width = 5.0);

// Jobs per inhabitant against population for every municipality with data
// for `year` (descriptive companion plot).
PlotDoc population_scatter(const Dataset& dataset, const std::string& year);

}  // namespace proxjobs

#endif  // PROXJOBS_REPORT_HPP
