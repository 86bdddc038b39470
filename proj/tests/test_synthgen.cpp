#include "proxjobs/synthgen.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "proxjobs/errors.hpp"
#include "proxjobs/modelset.hpp"
#include "test_util.hpp"

using namespace proxjobs;
using testutil::TempDir;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("generation is deterministic for a fixed seed") {
  GeneratorSpec gen;
  gen.municipalities_per_stratum = 50;
  gen.seed = 42;
  TempDir dir("determinism");
  const auto a = dir.path() / "a.csv";
  const auto b = dir.path() / "b.csv";
  write_municipalities(generate(gen).dataset, a);
  write_municipalities(generate(gen).dataset, b);
  CHECK(slurp(a) == slurp(b));
  CHECK(!slurp(a).empty());

  gen.seed = 43;
  const auto c = dir.path() / "c.csv";
  write_municipalities(generate(gen).dataset, c);
  CHECK(slurp(a) != slurp(c));
}

TEST_CASE("generated travel times map back to their stratum") {
  GeneratorSpec gen;
  gen.municipalities_per_stratum = 120;
  gen.seed = 3;
  gen.years = {"1999"};
  const SyntheticDataset data = generate(gen);
  REQUIRE(data.dataset.municipalities.size() ==
          gen.municipalities_per_stratum * gen.strata.stratum_count());
  // Municipalities are laid out stratum-block by stratum-block.
  for (std::size_t i = 0; i < data.dataset.municipalities.size(); ++i) {
    const std::size_t intended = i / gen.municipalities_per_stratum;
    const double tmfm = data.dataset.municipalities[i].tmfm_minutes;
    CHECK(stratum_of(gen.strata, tmfm).index == intended);
    if (intended + 1 == gen.strata.stratum_count()) {
      CHECK(tmfm <= gen.open_stratum_max_minutes);
    }
  }
}

TEST_CASE("generated data passes validation cleanly") {
  GeneratorSpec gen;
  gen.municipalities_per_stratum = 150;
  gen.seed = 8;
  const SyntheticDataset data = generate(gen);
  TempDir dir("clean");
  const auto path = dir.path() / "d.csv";
  write_municipalities(data.dataset, path);
  const Dataset loaded = load_municipalities(path);
  CHECK(loaded.row_warnings.empty());
  for (const std::string& year : gen.years) {
    const ObservationSet obs = to_observations(loaded, year);
    CHECK(obs.included == loaded.municipalities.size());
    CHECK(obs.exclusions.empty());
    // Only jobs/inhabitant > 1 flags are possible, and only from extreme
    // noise draws.
    for (const std::string& w : obs.warnings) {
      CHECK(w.find("service jobs per inhabitant") != std::string::npos);
    }
  }
}

TEST_CASE("job counts are the rounded product of ratio and population") {
  GeneratorSpec gen;
  gen.municipalities_per_stratum = 60;
  gen.seed = 12;
  gen.years = {"1999", "2006"};
  const SyntheticDataset data = generate(gen);
  for (std::size_t s = 0; s < gen.strata.stratum_count(); ++s) {
    const auto& exact99 = data.exact.at("1999").at(s);
    const auto& exact06 = data.exact.at("2006").at(s);
    REQUIRE(exact99.size() == gen.municipalities_per_stratum);
    for (std::size_t i = 0; i < exact99.size(); ++i) {
      const Municipality& m =
          data.dataset.municipalities[s * gen.municipalities_per_stratum + i];
      const double pop99 = std::round(std::exp(exact99[i].x));
      CHECK(m.population.at("1999") == static_cast<long long>(pop99));
      CHECK(m.service_jobs.at("1999") ==
            static_cast<long long>(std::round(exact99[i].y * pop99)));
      const double pop06 = std::round(std::exp(exact06[i].x));
      CHECK(m.population.at("2006") == static_cast<long long>(pop06));
      CHECK(m.service_jobs.at("2006") ==
            static_cast<long long>(std::round(exact06[i].y * pop06)));
    }
  }
}

TEST_CASE("noiseless limit recovers the ground truth") {
  GeneratorSpec gen;
  gen.municipalities_per_stratum = 1500;
  gen.noise_mean = 1e-9;
  gen.seed = 77;
  gen.years = {"1999"};
  const SyntheticDataset data = generate(gen);

  // On the exact observations the fit reproduces the line to solver
  // precision.
  const ModelSet exact_fit =
      fit_all_strata(data.exact.at("1999"), 0.01, "1999", gen.strata);
  REQUIRE(exact_fit.fits.size() == 7);
  for (const auto& [s, fit] : exact_fit.fits) {
    CHECK(std::abs(fit.intercept - gen.truth[s].first) <= 1e-7);
    CHECK(std::abs(fit.slope - gen.truth[s].second) <= 1e-7);
  }

  // Through the CSV schema the ratio is quantized to 1/population, which
  // bounds how closely the refit can track the line.
  TempDir dir("noiseless");
  const auto path = dir.path() / "d.csv";
  write_municipalities(data.dataset, path);
  const ObservationSet obs = to_observations(load_municipalities(path), "1999");
  const ModelSet csv_fit = fit_all_strata(obs.by_stratum, 0.01, "1999");
  REQUIRE(csv_fit.fits.size() == 7);
  for (const auto& [s, fit] : csv_fit.fits) {
    CHECK(std::abs(fit.intercept - gen.truth[s].first) <= 0.02);
    CHECK(std::abs(fit.slope - gen.truth[s].second) <= 0.004);
  }
}

TEST_CASE("noise residuals have the expected first percentile") {
  // One open-ended stratum keeps the check at 50k points cheap.
  GeneratorSpec gen;
  gen.strata.boundaries = {0.0};
  gen.truth = {{-0.084, 0.016}};
  gen.municipalities_per_stratum = 50000;
  gen.seed = 2024;
  gen.years = {"1999"};
  const double target = -gen.noise_mean * std::log(0.99);

  auto empirical_percentile = [](std::vector<double> values) {
    const std::size_t k = values.size() / 100;
    std::nth_element(values.begin(), values.begin() + k, values.end());
    return values[k];
  };

  // Populations from 250 up stay clear of the max(0, .) clamp, so the
  // residual of every point is a pure noise draw.
  gen.population_min = 250;
  SyntheticDataset clean = generate(gen);
  std::vector<double> residuals;
  for (const Observation& o : clean.exact.at("1999").at(0)) {
    residuals.push_back(o.y - (gen.truth[0].first + gen.truth[0].second * o.x));
    CHECK(residuals.back() >= 0.0);
  }
  const double q_clean = empirical_percentile(residuals);
  CHECK(q_clean >= 0.85 * target);
  CHECK(q_clean <= 1.15 * target);

  // With the default range the clamp inflates low quantiles, but the first
  // percentile stays within +-50% of the noise quantile.
  gen.population_min = 50;
  gen.seed = 2025;
  SyntheticDataset mixed = generate(gen);
  residuals.clear();
  for (const Observation& o : mixed.exact.at("1999").at(0)) {
    residuals.push_back(o.y - (gen.truth[0].first + gen.truth[0].second * o.x));
  }
  const double q_mixed = empirical_percentile(residuals);
  CHECK(q_mixed >= 0.5 * target);
  CHECK(q_mixed <= 1.5 * target);
}

TEST_CASE("generator spec JSON mirrors the field names") {
  TempDir dir("spec");
  const auto path = dir.path() / "spec.json";
  {
    std::ofstream out(path);
    out << R"({
      "truth": [{"intercept": -0.05, "slope": 0.01}],
      "boundaries": [0, 10],
      "municipalities_per_stratum": 9,
      "population_min": 100,
      "population_max": 900,
      "noise_mean": 0.02,
      "seed": 7,
      "years": ["2020"]
    })";
  }
  GeneratorSpec spec = load_generator_spec(path);
  CHECK(spec.truth.size() == 1);
  CHECK(spec.truth[0].first == doctest::Approx(-0.05));
  CHECK(spec.strata.boundaries == std::vector<double>{0.0, 10.0});
  CHECK(spec.municipalities_per_stratum == 9);
  CHECK(spec.population_min == 100);
  CHECK(spec.population_max == 900);
  CHECK(spec.noise_mean == doctest::Approx(0.02));
  CHECK(spec.seed == 7);
  CHECK(spec.years == std::vector<std::string>{"2020"});
  CHECK(spec.open_stratum_max_minutes == 60);  // default retained

  // truth must then match the boundary count.
  const SyntheticDataset data = generate(spec);
  CHECK(data.dataset.municipalities.size() == 18);
}

TEST_CASE("generator spec JSON failure modes") {
  TempDir dir("badspec");
  CHECK_THROWS_AS(load_generator_spec(dir.path() / "missing.json"), DataError);
  const auto bad = dir.path() / "bad.json";
  {
    std::ofstream out(bad);
    out << "{ not json";
  }
  CHECK_THROWS_AS(load_generator_spec(bad), DataError);
  const auto mismatch = dir.path() / "mismatch.json";
  {
    std::ofstream out(mismatch);
    out << R"({"truth": [{"intercept": 0, "slope": 0}], "boundaries": [0, 5, 10]})";
  }
  CHECK_THROWS_AS(load_generator_spec(mismatch), std::invalid_argument);
}

TEST_CASE("generator spec validation") {
  GeneratorSpec gen;
  gen.municipalities_per_stratum = 0;
  CHECK_THROWS_AS(gen.validate(), std::invalid_argument);
  gen = GeneratorSpec{};
  gen.population_min = 0.0;
  CHECK_THROWS_AS(gen.validate(), std::invalid_argument);
  gen = GeneratorSpec{};
  gen.population_max = gen.population_min - 1;
  CHECK_THROWS_AS(gen.validate(), std::invalid_argument);
  gen = GeneratorSpec{};
  gen.noise_mean = 0.0;
  CHECK_THROWS_AS(gen.validate(), std::invalid_argument);
  gen = GeneratorSpec{};
  gen.years = {};
  CHECK_THROWS_AS(gen.validate(), std::invalid_argument);
  gen = GeneratorSpec{};
  gen.open_stratum_max_minutes = 30.0;
  CHECK_THROWS_AS(gen.validate(), std::invalid_argument);
  gen = GeneratorSpec{};
  gen.truth.pop_back();
  CHECK_THROWS_AS(gen.validate(), std::invalid_argument);
}
