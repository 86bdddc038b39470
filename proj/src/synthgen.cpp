#include "proxjobs/synthgen.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "proxjobs/errors.hpp"

namespace proxjobs {

const std::vector<std::pair<double, double>>& default_ground_truth() {
  static const std::vector<std::pair<double, double>> truth{
      {-0.084, 0.016}, {-0.083, 0.016}, {-0.079, 0.015}, {-0.094, 0.018},
      {-0.097, 0.019}, {-0.099, 0.019}, {-0.112, 0.021},
  };
  return truth;
}

void GeneratorSpec::validate() const {
  strata.validate();
  if (truth.size() != strata.stratum_count()) {
    throw std::invalid_argument(
        "GeneratorSpec: need one (intercept, slope) pair per stratum (" +
        std::to_string(strata.stratum_count()) + " strata, " +
        std::to_string(truth.size()) + " pairs)");
  }
  if (municipalities_per_stratum == 0) {
    throw std::invalid_argument(
        "GeneratorSpec: municipalities_per_stratum must be > 0");
  }
  if (!(population_min >= 1.0) ||
      !(std::floor(population_max) >= std::ceil(population_min))) {
    throw std::invalid_argument(
        "GeneratorSpec: population range must contain an integer and "
        "satisfy 1 <= min <= max");
  }
  if (!(noise_mean > 0.0) || !std::isfinite(noise_mean)) {
    throw std::invalid_argument("GeneratorSpec: noise_mean must be > 0");
  }
  if (years.empty()) {
    throw std::invalid_argument("GeneratorSpec: need at least one year tag");
  }
  if (!(open_stratum_max_minutes > strata.boundaries.back())) {
    throw std::invalid_argument(
        "GeneratorSpec: open_stratum_max_minutes must exceed the last "
        "boundary");
  }
}

GeneratorSpec load_generator_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": invalid JSON: " + e.what());
  }

  GeneratorSpec spec;
  try {
    if (doc.contains("boundaries")) {
      spec.strata.boundaries = doc["boundaries"].get<std::vector<double>>();
    }
    if (doc.contains("truth")) {
      spec.truth.clear();
      for (const auto& row : doc["truth"]) {
        spec.truth.emplace_back(row.at("intercept").get<double>(),
                                row.at("slope").get<double>());
      }
    }
    if (doc.contains("municipalities_per_stratum")) {
      spec.municipalities_per_stratum =
          doc["municipalities_per_stratum"].get<std::size_t>();
    }
    if (doc.contains("population_min")) {
      spec.population_min = doc["population_min"].get<double>();
    }
    if (doc.contains("population_max")) {
      spec.population_max = doc["population_max"].get<double>();
    }
    if (doc.contains("noise_mean")) {
      spec.noise_mean = doc["noise_mean"].get<double>();
    }
    if (doc.contains("seed")) {
      spec.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("years")) {
      spec.years = doc["years"].get<std::vector<std::string>>();
    }
    if (doc.contains("open_stratum_max_minutes")) {
      spec.open_stratum_max_minutes =
          doc["open_stratum_max_minutes"].get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": bad generator spec: " + e.what());
  }
  spec.validate();
  return spec;
}

SyntheticDataset generate(const GeneratorSpec& spec) {
  spec.validate();

  SyntheticDataset out;
  out.dataset.years = spec.years;
  out.dataset.provenance =
      "synthetic (seed=" + std::to_string(spec.seed) + ")";

  std::mt19937_64 rng(spec.seed);
  const double log_min = std::log(spec.population_min);
  const double log_max = std::log(spec.population_max);
  std::uniform_real_distribution<double> log_pop(log_min, log_max);
  std::exponential_distribution<double> noise(1.0 / spec.noise_mean);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const std::size_t strata_count = spec.strata.stratum_count();
  std::size_t serial = 0;
  for (std::size_t s = 0; s < strata_count; ++s) {
    const auto [intercept, slope] = spec.truth[s];
    const double lo = spec.strata.boundaries[s];
    const double hi = s + 1 < strata_count ? spec.strata.boundaries[s + 1]
                                           : spec.open_stratum_max_minutes;
    for (std::size_t i = 0; i < spec.municipalities_per_stratum; ++i) {
      Municipality m;
      char id[16];
      std::snprintf(id, sizeof(id), "M%07zu", ++serial);
      m.id = id;
      // hi - u*(hi-lo) with u in [0,1) lands in ]lo, hi].
      m.tmfm_minutes = hi - unit(rng) * (hi - lo);
      for (const std::string& year : spec.years) {
        double pop = std::round(std::exp(log_pop(rng)));
        pop = std::min(std::max(pop, std::ceil(spec.population_min)),
                       std::floor(spec.population_max));
        const double x = std::log(pop);
        const double y = std::max(0.0, intercept + slope * x + noise(rng));
        m.population[year] = static_cast<long long>(pop);
        m.service_jobs[year] = static_cast<long long>(std::round(y * pop));
        out.exact[year][s].push_back(Observation{x, y});
      }
      out.dataset.municipalities.push_back(std::move(m));
    }
  }
  return out;
}

}  // namespace proxjobs
