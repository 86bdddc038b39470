#include "proxjobs/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "proxjobs/csv.hpp"
#include "proxjobs/errors.hpp"

namespace proxjobs {

namespace {

std::string three_decimals(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

std::string TextTable::to_csv() const {
  std::string out = csv::join_line(header) + "\n";
  for (const auto& row : rows) {
    out += csv::join_line(row) + "\n";
  }
  return out;
}

std::string TextTable::to_text() const {
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  auto emit = [&](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) line += "  ";
      line += cells[c];
      if (c + 1 < cells.size()) {
        line.append(width[c] - cells[c].size(), ' ');
      }
    }
    return line + "\n";
  };
  std::string out = emit(header);
  for (const auto& row : rows) out += emit(row);
  return out;
}

nlohmann::json PlotDoc::to_json() const {
  nlohmann::json doc;
  doc["series"] = nlohmann::json::array();
  for (const PlotSeries& s : series) {
    nlohmann::json entry;
    entry["name"] = s.name;
    entry["x"] = s.x;
    entry["y"] = s.y;
    entry["meta"] = s.meta;
    doc["series"].push_back(entry);
  }
  return doc;
}

std::string PlotDoc::dump(int indent) const { return to_json().dump(indent); }

TextTable coefficients_table(const ModelSet& modelset) {
  if (modelset.fits.empty()) {
    throw std::invalid_argument("coefficients_table: model set has no fits");
  }
  TextTable table;
  table.header = {"stratum", "intercept", "slope", "n", "note"};
  for (std::size_t s = 0; s < modelset.spec.stratum_count(); ++s) {
    std::vector<std::string> row(5);
    row[0] = modelset.spec.label(s);
    auto fit = modelset.fits.find(s);
    if (fit != modelset.fits.end()) {
      row[1] = three_decimals(fit->second.intercept);
      row[2] = three_decimals(fit->second.slope);
      row[3] = std::to_string(fit->second.n);
      row[4] = fit->second.small_sample
                   ? "small sample (n < 1/tau); quantile is the minimum"
                   : "";
    } else {
      row[4] = "skipped: " + modelset.skipped.at(s);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

TextTable comparison_rows_table(const ComparisonTable& table) {
  TextTable out;
  out.header = {"year", "stratum", "population", "predicted", "predicted_raw"};
  for (const ComparisonRow& row : table.rows) {
    out.rows.push_back({row.year, row.label, csv::format_double(row.population),
                        csv::format_double(row.clamped),
                        csv::format_double(row.raw)});
  }
  return out;
}

TextTable comparison_differences_table(const ComparisonTable& table) {
  TextTable out;
  out.header = {"year", "population", "stratum_a", "stratum_b", "difference"};
  for (const StratumDifference& d : table.differences) {
    out.rows.push_back({d.year, csv::format_double(d.population),
                        table.spec.label(d.stratum_a),
                        table.spec.label(d.stratum_b),
                        csv::format_double(d.difference)});
  }
  return out;
}

PlotDoc scatter_with_line(const ModelSet& modelset,
                          const StratumObservations& observations,
                          std::size_t stratum_index,
                          const ScatterOptions& options) {
  auto fit_it = modelset.fits.find(stratum_index);
  if (fit_it == modelset.fits.end()) {
    throw IncompatibleModelsError(
        "scatter_with_line: stratum " + std::to_string(stratum_index) +
        " has no fit in the model set");
  }
  auto obs_it = observations.find(stratum_index);
  if (obs_it == observations.end() || obs_it->second.empty()) {
    throw IncompatibleModelsError(
        "scatter_with_line: no observations for stratum " +
        std::to_string(stratum_index));
  }
  const QuantileFit& fit = fit_it->second;
  const std::vector<Observation>& obs = obs_it->second;
  const std::string label = modelset.spec.label(stratum_index);

  PlotDoc doc;
  PlotSeries scatter;
  scatter.name = "observations " + label;
  scatter.meta = {{"year", modelset.year},
                  {"stratum", label},
                  {"kind", "scatter"}};
  double min_x = obs.front().x, max_x = obs.front().x;
  for (const Observation& o : obs) {
    scatter.x.push_back(std::exp(o.x));
    scatter.y.push_back(o.y);
    min_x = std::min(min_x, o.x);
    max_x = std::max(max_x, o.x);
  }
  doc.series.push_back(std::move(scatter));

  PlotSeries line;
  line.name = "fit " + label;
  line.meta = {{"year", modelset.year},
               {"stratum", label},
               {"kind", "line"},
               {"tau", fit.tau},
               {"intercept", fit.intercept},
               {"slope", fit.slope}};
  const std::size_t samples = std::max<std::size_t>(options.line_samples, 2);
  for (std::size_t i = 0; i < samples; ++i) {
    const double frac =
        static_cast<double>(i) / static_cast<double>(samples - 1);
    const double x = min_x + frac * (max_x - min_x);  // log-spaced in P
    const double population = std::exp(x);
    line.x.push_back(population);
    line.y.push_back(predict(fit, population, options.clamp));
  }
  doc.series.push_back(std::move(line));
  return doc;
}

PlotDoc tmfm_profile(const ComparisonTable& comparison) {
  if (comparison.rows.empty()) {
    throw std::invalid_argument("tmfm_profile: empty comparison table");
  }
  PlotDoc doc;
  for (const std::string& year : comparison.years) {
    for (double population : comparison.populations) {
      PlotSeries series;
      series.name = year + " P=" + csv::format_double(population);
      series.meta = {{"year", year},
                     {"population", population},
                     {"clamped", comparison.clamp}};
      nlohmann::json labels = nlohmann::json::array();
      for (std::size_t s = 0; s < comparison.spec.stratum_count(); ++s) {
        const ComparisonRow* row = comparison.find(year, s, population);
        if (row == nullptr) continue;
        series.x.push_back(static_cast<double>(s));
        series.y.push_back(comparison.clamp ? row->clamped : row->raw);
        labels.push_back(row->label);
      }
      series.meta["strata"] = labels;
      doc.series.push_back(std::move(series));
    }
  }
  return doc;
}

PlotDoc tmfm_histogram(const Dataset& dataset, double bin_width) {
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
    throw std::invalid_argument("tmfm_histogram: bin width must be > 0");
  }
  double max_tmfm = 0.0;
  for (const Municipality& m : dataset.municipalities) {
    max_tmfm = std::max(max_tmfm, m.tmfm_minutes);
  }
  const std::size_t bins =
      static_cast<std::size_t>(std::floor(max_tmfm / bin_width)) + 1;
  std::vector<double> counts(bins, 0.0);
  for (const Municipality& m : dataset.municipalities) {
    std::size_t b = static_cast<std::size_t>(m.tmfm_minutes / bin_width);
    if (b >= bins) b = bins - 1;
    counts[b] += 1.0;
  }
  PlotDoc doc;
  PlotSeries series;
  series.name = "tmfm histogram";
  series.meta = {{"bin_width", bin_width}, {"kind", "histogram"}};
  for (std::size_t b = 0; b < bins; ++b) {
    series.x.push_back((static_cast<double>(b) + 0.5) * bin_width);
    series.y.push_back(counts[b]);
  }
  doc.series.push_back(std::move(series));
  return doc;
}

PlotDoc population_scatter(const Dataset& dataset, const std::string& year) {
  PlotDoc doc;
  PlotSeries series;
  series.name = "service jobs per inhabitant " + year;
  series.meta = {{"year", year}, {"kind", "scatter"}};
  for (const Municipality& m : dataset.municipalities) {
    auto pit = m.population.find(year);
    auto jit = m.service_jobs.find(year);
    if (pit == m.population.end() || jit == m.service_jobs.end()) continue;
    if (pit->second < 1) continue;
    series.x.push_back(static_cast<double>(pit->second));
    series.y.push_back(static_cast<double>(jit->second) /
                       static_cast<double>(pit->second));
  }
  doc.series.push_back(std::move(series));
  return doc;
}

}  // namespace proxjobs
