#include "proxjobs/quantreg.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <vector>

#include "proxjobs/errors.hpp"
#include "test_util.hpp"

using namespace proxjobs;
using testutil::check_fit_invariants;
using testutil::random_points;

TEST_CASE("check_loss on simple residual vectors") {
  CHECK(check_loss(std::vector<double>{0.0, 0.0, 0.0}, 0.01) == 0.0);
  CHECK(check_loss(std::vector<double>{1.0}, 0.01) == doctest::Approx(0.01));
  CHECK(check_loss(std::vector<double>{-1.0}, 0.01) == doctest::Approx(0.99));
  // Hand sum: 0.5*2 + 0.5*1 + 0.5*0.5.
  CHECK(check_loss(std::vector<double>{2.0, -1.0, 0.5}, 0.5) ==
        doctest::Approx(1.75));
}

TEST_CASE("check_loss is zero only for all-zero residuals") {
  CHECK(check_loss(std::vector<double>{}, 0.3) == 0.0);
  CHECK(check_loss(std::vector<double>{1e-12}, 0.3) > 0.0);
}

TEST_CASE("check_loss rejects bad input") {
  CHECK_THROWS_AS(check_loss(std::vector<double>{1.0}, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_loss(std::vector<double>{1.0}, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_loss(std::vector<double>{1.0}, -0.1),
                  std::invalid_argument);
  const double nan = std::nan("");
  CHECK_THROWS_AS(check_loss(std::vector<double>{nan}, 0.5),
                  std::invalid_argument);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(check_loss(std::vector<double>{inf}, 0.5),
                  std::invalid_argument);
}

TEST_CASE("two points determine the line exactly") {
  const std::vector<Observation> pts{{0.0, 0.1}, {1.0, 0.3}};
  const QuantileFit fit = fit_quantile_line(pts, 0.01);
  CHECK(fit.intercept == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(fit.slope == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(fit.loss == doctest::Approx(0.0));
  CHECK(fit.n_zero == 2);
  check_fit_invariants(fit, pts, 0.01);
}

TEST_CASE("collinear points give the common line at zero loss") {
  std::vector<Observation> pts;
  for (int i = 0; i < 9; ++i) {
    const double x = 0.5 * i;
    pts.push_back(Observation{x, 0.02 + 0.015 * x});
  }
  for (double tau : {0.01, 0.37, 0.99}) {
    const QuantileFit fit = fit_quantile_line(pts, tau);
    CHECK(fit.intercept == doctest::Approx(0.02).epsilon(1e-9));
    CHECK(fit.slope == doctest::Approx(0.015).epsilon(1e-9));
    CHECK(fit.loss <= 1e-12);
    CHECK(fit.n_zero == pts.size());
  }
}

// Pair lines of {(0,0),(1,1),(2,0)}: slope 1 and slope -1 lines both leave
// one residual of -2 (loss 1.0 at tau=0.5); the flat line leaves residual 1
// at the middle point (loss 0.5). Unique optimum.
TEST_CASE("three-point median instance, enumerated by hand") {
  const std::vector<Observation> pts{{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}};
  const QuantileFit fit = fit_quantile_line(pts, 0.5);
  CHECK(fit.loss == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(0.0));
  CHECK(fit.slope == doctest::Approx(0.0));
  const QuantileFit oracle = brute_force_fit(pts, 0.5);
  CHECK(oracle.loss == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(oracle.intercept == doctest::Approx(0.0));
  CHECK(oracle.slope == doctest::Approx(0.0));
  check_fit_invariants(fit, pts, 0.5);
}

// Median fit of the 2x2 lattice {(0,0),(0,1),(1,0),(1,1)}: every line inside
// the unit band has total loss 1, so the optimum is a two-dimensional tie.
// The lexicographically smallest (slope, intercept) vertex is the
// anti-diagonal through (0,1) and (1,0).
TEST_CASE("flat optimum resolves to the lexicographic minimum") {
  const std::vector<Observation> pts{
      {0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}};
  const QuantileFit fit = fit_quantile_line(pts, 0.5);
  const QuantileFit oracle = brute_force_fit(pts, 0.5);
  CHECK(fit.loss == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(oracle.loss == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.slope == doctest::Approx(-1.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(oracle.slope == doctest::Approx(-1.0));
  CHECK(oracle.intercept == doctest::Approx(1.0));
}

TEST_CASE("degenerate designs are rejected") {
  CHECK_THROWS_AS(fit_quantile_line(std::vector<Observation>{{1.0, 2.0}}, 0.5),
                  DegenerateDesignError);
  const std::vector<Observation> same_x{{1.0, 0.1}, {1.0, 0.2}, {1.0, 0.3}};
  CHECK_THROWS_AS(fit_quantile_line(same_x, 0.5), DegenerateDesignError);
  CHECK_THROWS_AS(brute_force_fit(same_x, 0.5), DegenerateDesignError);
}

TEST_CASE("non-finite input and bad tau are rejected") {
  const std::vector<Observation> pts{{0.0, 0.1}, {1.0, 0.3}};
  CHECK_THROWS_AS(fit_quantile_line(pts, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(fit_quantile_line(pts, 1.0), std::invalid_argument);
  std::vector<Observation> bad = pts;
  bad[0].y = std::nan("");
  CHECK_THROWS_AS(fit_quantile_line(bad, 0.5), std::invalid_argument);
  bad[0].y = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(fit_quantile_line(bad, 0.5), std::invalid_argument);
}

TEST_CASE("brute force size guard") {
  std::mt19937_64 rng(7);
  const std::vector<Observation> pts = random_points(rng, 101, false);
  CHECK_THROWS_AS(brute_force_fit(pts, 0.5), SizeLimitError);
}

TEST_CASE("two-point instances match the oracle trivially") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<Observation> pts = random_points(rng, 2, false);
    const QuantileFit fit = fit_quantile_line(pts, 0.2);
    const QuantileFit oracle = brute_force_fit(pts, 0.2);
    CHECK(fit.intercept == doctest::Approx(oracle.intercept));
    CHECK(fit.slope == doctest::Approx(oracle.slope));
  }
}

TEST_CASE("solver matches the enumeration oracle on random instances") {
  std::mt19937_64 rng(20121999);
  std::uniform_int_distribution<std::size_t> size(3, 40);
  const double taus[] = {0.01, 0.1, 0.5};
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<Observation> pts = random_points(rng, size(rng));
    const double tau = taus[trial % 3];
    const QuantileFit fit = fit_quantile_line(pts, tau);
    const QuantileFit oracle = brute_force_fit(pts, tau);
    REQUIRE(std::abs(fit.loss - oracle.loss) <= 1e-9);
    check_fit_invariants(fit, pts, tau);
    check_fit_invariants(oracle, pts, tau);
  }
}

TEST_CASE("fit never beats nor loses to itself under input permutation") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> size(3, 30);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Observation> pts = random_points(rng, size(rng));
    const QuantileFit a = fit_quantile_line(pts, 0.1);
    std::shuffle(pts.begin(), pts.end(), rng);
    const QuantileFit b = fit_quantile_line(pts, 0.1);
    CHECK(std::abs(a.loss - b.loss) <= 1e-9 * (1.0 + a.loss));
  }
}

TEST_CASE("loss is bounded by the first valid pair line") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::size_t> size(3, 40);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<Observation> pts = random_points(rng, size(rng));
    const double tau = 0.25;
    const QuantileFit fit = fit_quantile_line(pts, tau);
    std::size_t j = 0;
    for (std::size_t k = 1; k < pts.size(); ++k) {
      if (pts[k].x != pts[0].x) {
        j = k;
        break;
      }
    }
    REQUIRE(j != 0);
    const double slope = (pts[j].y - pts[0].y) / (pts[j].x - pts[0].x);
    const double intercept = pts[0].y - slope * pts[0].x;
    std::vector<double> residuals;
    for (const Observation& p : pts) {
      residuals.push_back(p.y - (intercept + slope * p.x));
    }
    CHECK(fit.loss <=
          check_loss(residuals, tau) + 1e-12 * (1.0 + std::abs(fit.loss)));
  }
}

TEST_CASE("y-scale equivariance") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> size(3, 40);
  std::uniform_real_distribution<double> lambda(0.1, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<Observation> pts = random_points(rng, size(rng), false);
    const double tau = trial % 2 == 0 ? 0.01 : 0.5;
    const double scale = lambda(rng);
    std::vector<Observation> scaled = pts;
    for (Observation& p : scaled) p.y *= scale;
    const QuantileFit base = fit_quantile_line(pts, tau);
    const QuantileFit fit = fit_quantile_line(scaled, tau);
    CHECK(fit.intercept ==
          doctest::Approx(scale * base.intercept).epsilon(1e-9));
    CHECK(fit.slope == doctest::Approx(scale * base.slope).epsilon(1e-9));
    CHECK(fit.loss == doctest::Approx(scale * base.loss).epsilon(1e-9));
  }
}

TEST_CASE("x-shift equivariance") {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<std::size_t> size(3, 40);
  std::uniform_real_distribution<double> shift(-5.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<Observation> pts = random_points(rng, size(rng), false);
    const double tau = trial % 2 == 0 ? 0.01 : 0.5;
    const double c = shift(rng);
    std::vector<Observation> shifted = pts;
    for (Observation& p : shifted) p.x += c;
    const QuantileFit base = fit_quantile_line(pts, tau);
    const QuantileFit fit = fit_quantile_line(shifted, tau);
    CHECK(fit.slope == doctest::Approx(base.slope).epsilon(1e-9));
    CHECK(fit.intercept ==
          doctest::Approx(base.intercept - c * base.slope).epsilon(1e-9));
  }
}

namespace {

// True when no pair line with measurably different coefficients comes within
// tie distance of the optimal loss.
bool optimum_is_unique(const std::vector<Observation>& pts, double tau) {
  const QuantileFit best = brute_force_fit(pts, tau);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (pts[i].x == pts[j].x) continue;
      const double slope = (pts[j].y - pts[i].y) / (pts[j].x - pts[i].x);
      const double intercept = pts[i].y - slope * pts[i].x;
      if (std::abs(slope - best.slope) <= 1e-7 &&
          std::abs(intercept - best.intercept) <= 1e-7) {
        continue;  // same line
      }
      std::vector<double> residuals;
      for (const Observation& p : pts) {
        residuals.push_back(p.y - (intercept + slope * p.x));
      }
      if (check_loss(residuals, tau) <= best.loss + 1e-9 * (1.0 + best.loss)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("tau reflection") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::size_t> size(3, 35);
  int coefficient_checks = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<Observation> pts = random_points(rng, size(rng), false);
    const double tau = trial % 2 == 0 ? 0.01 : 0.3;
    std::vector<Observation> reflected = pts;
    for (Observation& p : reflected) p.y = -p.y;
    const QuantileFit base = fit_quantile_line(pts, tau);
    const QuantileFit fit = fit_quantile_line(reflected, 1.0 - tau);
    CHECK(fit.loss == doctest::Approx(base.loss).epsilon(1e-9));
    // Coefficients are only comparable when the optimum is unique; negation
    // flips which tied vertex the lexicographic rule selects.
    if (optimum_is_unique(pts, tau)) {
      ++coefficient_checks;
      CHECK(fit.intercept == doctest::Approx(-base.intercept).epsilon(1e-9));
      CHECK(fit.slope == doctest::Approx(-base.slope).epsilon(1e-9));
    }
  }
  CHECK(coefficient_checks >= 90);  // the clause must not be vacuous
}

TEST_CASE("small-sample flag marks fits with n below 1/tau") {
  std::mt19937_64 rng(29);
  const std::vector<Observation> few = random_points(rng, 50, false);
  CHECK(fit_quantile_line(few, 0.01).small_sample);
  CHECK_FALSE(fit_quantile_line(few, 0.5).small_sample);
  const std::vector<Observation> many = random_points(rng, 100, false);
  CHECK_FALSE(fit_quantile_line(many, 0.01).small_sample);
}

TEST_CASE("duplicate points carry weight in the loss") {
  // Two copies of a low point pull the median line down to it.
  const std::vector<Observation> pts{
      {0.0, 0.0}, {0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}};
  const QuantileFit fit = fit_quantile_line(pts, 0.5);
  const QuantileFit oracle = brute_force_fit(pts, 0.5);
  CHECK(std::abs(fit.loss - oracle.loss) <= 1e-12);
  CHECK(fit.intercept == doctest::Approx(0.0));
  CHECK(fit.slope == doctest::Approx(0.0));
}

TEST_CASE("predict evaluates the line in log population") {
  QuantileFit near;
  near.intercept = -0.084;
  near.slope = 0.016;
  CHECK(std::abs(predict(near, 3000.0) - 0.0441) <= 0.0005);

  QuantileFit far;
  far.intercept = -0.112;
  far.slope = 0.021;
  CHECK(std::abs(predict(far, 500.0) - 0.0185) <= 0.0005);

  // ln 1 = 0, so a negative intercept clamps to zero.
  CHECK(predict(near, 1.0, true) == 0.0);
  CHECK(predict(near, 1.0, false) == doctest::Approx(-0.084));

  CHECK_THROWS_AS(predict(near, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(predict(near, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(predict(near, std::nan("")), std::invalid_argument);
}

TEST_CASE("concurrent fits on shared read-only data agree") {
  std::mt19937_64 rng(31);
  const std::vector<Observation> pts = random_points(rng, 200, false);
  const QuantileFit reference = fit_quantile_line(pts, 0.1);
  std::vector<std::future<QuantileFit>> futures;
  for (int i = 0; i < 8; ++i) {
    futures.push_back(std::async(std::launch::async, [&pts] {
      return fit_quantile_line(pts, 0.1);
    }));
  }
  for (auto& f : futures) {
    const QuantileFit fit = f.get();
    CHECK(fit.intercept == reference.intercept);
    CHECK(fit.slope == reference.slope);
  }
}
