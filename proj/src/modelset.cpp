#include "proxjobs/modelset.hpp"

#include <cmath>
#include <stdexcept>

#include "proxjobs/csv.hpp"
#include "proxjobs/errors.hpp"

namespace proxjobs {

ModelSet fit_all_strata(const StratumObservations& observations, double tau,
                        const std::string& year, const StratumSpec& spec) {
  spec.validate();
  if (!(tau > 0.0 && tau < 1.0)) {
    throw std::invalid_argument("fit_all_strata: tau must lie in (0,1)");
  }
  ModelSet out;
  out.year = year;
  out.tau = tau;
  out.spec = spec;
  for (std::size_t s = 0; s < spec.stratum_count(); ++s) {
    auto it = observations.find(s);
    const std::size_t n = it == observations.end() ? 0 : it->second.size();
    if (n < 2) {
      out.skipped[s] =
          "insufficient observations (n=" + std::to_string(n) + ")";
      continue;
    }
    try {
      out.fits[s] = fit_quantile_line(it->second, tau);
    } catch (const DegenerateDesignError&) {
      out.skipped[s] = "degenerate design (all x identical)";
    }
  }
  return out;
}

ModelSet model_set_from_coefficients(
    const std::string& year, double tau,
    const std::vector<std::pair<double, double>>& intercept_slope,
    const StratumSpec& spec) {
  spec.validate();
  if (intercept_slope.size() != spec.stratum_count()) {
    throw std::invalid_argument(
        "model_set_from_coefficients: expected one (intercept, slope) pair "
        "per stratum");
  }
  ModelSet out;
  out.year = year;
  out.tau = tau;
  out.spec = spec;
  for (std::size_t s = 0; s < intercept_slope.size(); ++s) {
    QuantileFit fit;
    fit.tau = tau;
    fit.intercept = intercept_slope[s].first;
    fit.slope = intercept_slope[s].second;
    out.fits[s] = fit;
  }
  return out;
}

const ComparisonRow* ComparisonTable::find(const std::string& year,
                                           std::size_t stratum,
                                           double population) const {
  for (const ComparisonRow& row : rows) {
    if (row.year == year && row.stratum == stratum &&
        row.population == population) {
      return &row;
    }
  }
  return nullptr;
}

double ComparisonTable::difference(const std::string& year, double population,
                                   std::size_t stratum_a,
                                   std::size_t stratum_b) const {
  for (const StratumDifference& d : differences) {
    if (d.year == year && d.population == population &&
        d.stratum_a == stratum_a && d.stratum_b == stratum_b) {
      return d.difference;
    }
  }
  throw std::out_of_range("ComparisonTable::difference: no entry for " + year +
                          " strata " + std::to_string(stratum_a) + "/" +
                          std::to_string(stratum_b));
}

ComparisonTable compare_populations(const std::vector<ModelSet>& models,
                                    const std::vector<double>& populations,
                                    bool clamp) {
  if (models.empty()) {
    throw std::invalid_argument("compare_populations: no models given");
  }
  if (populations.empty()) {
    throw std::invalid_argument("compare_populations: no populations given");
  }
  for (double p : populations) {
    if (!std::isfinite(p) || p < 1.0) {
      throw std::invalid_argument(
          "compare_populations: populations must be >= 1");
    }
  }
  for (const ModelSet& m : models) {
    if (!(m.spec == models.front().spec)) {
      throw IncompatibleModelsError(
          "compare_populations: model sets use different stratum boundaries");
    }
  }

  ComparisonTable table;
  table.spec = models.front().spec;
  table.clamp = clamp;
  table.populations = populations;
  for (const ModelSet& m : models) {
    table.years.push_back(m.year);
    for (double pop : populations) {
      for (const auto& [stratum, fit] : m.fits) {
        ComparisonRow row;
        row.year = m.year;
        row.stratum = stratum;
        row.label = m.spec.label(stratum);
        row.population = pop;
        row.raw = predict(fit, pop, false);
        row.clamped = predict(fit, pop, true);
        table.rows.push_back(row);
      }
      for (const auto& [sa, fa] : m.fits) {
        for (const auto& [sb, fb] : m.fits) {
          if (sa == sb) continue;
          const double va = clamp ? predict(fa, pop, true) : predict(fa, pop);
          const double vb = clamp ? predict(fb, pop, true) : predict(fb, pop);
          table.differences.push_back(
              StratumDifference{m.year, pop, sa, sb, va - vb});
        }
      }
    }
  }
  return table;
}

}  // namespace proxjobs
