#ifndef PROXJOBS_QUANTREG_HPP
#define PROXJOBS_QUANTREG_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace proxjobs {

// One regression point: x = ln(inhabitants), y = service jobs per inhabitant.
struct Observation {
  double x = 0.0;
  double y = 0.0;
};

// A fitted quantile line y = intercept + slope * x together with the
// diagnostics needed to verify optimality after the fact.
struct QuantileFit {
  double tau = 0.0;
  double intercept = 0.0;
  double slope = 0.0;
  std::size_t n = 0;
  double loss = 0.0;       // minimized total check loss
  std::size_t n_neg = 0;   // residuals < -zero tolerance
  std::size_t n_pos = 0;   // residuals > +zero tolerance
  std::size_t n_zero = 0;  // |residual| within zero tolerance
  bool small_sample = false;  // n < 1/tau: the quantile degenerates to the minimum
};

// |r| <= residual_zero_tolerance(y) counts as an interpolated point.
inline double residual_zero_tolerance(double y) {
  double ay = y < 0 ? -y : y;
  return 1e-9 * (1.0 + ay);
}

// Check (pinball) loss rho_tau(r) = r * (tau - 1{r < 0}).
double check_loss_term(double residual, double tau);

// Total check loss of a residual vector. Throws std::invalid_argument on
// non-finite residuals or tau outside (0,1).
double check_loss(std::span<const double> residuals, double tau);

// Exact linear quantile regression by pivoting among lines that interpolate
// two observations. Throws DegenerateDesignError when n < 2 or all x are
// identical, std::invalid_argument on non-finite input or bad tau.
// Equal-loss optima are resolved to the lexicographically smallest
// (slope, intercept).
QuantileFit fit_quantile_line(std::span<const Observation> points, double tau);

// Independent oracle: enumerates every line through a pair of observations
// with distinct x and returns the loss minimizer (same tie rule as above).
// Guarded to n <= 100 (SizeLimitError beyond that).
QuantileFit brute_force_fit(std::span<const Observation> points, double tau);

// intercept + slope * ln(population); optionally floored at zero.
// population must be >= 1 and finite.
double predict(const QuantileFit& fit, double population,
               bool clamp_nonnegative = false);

}  // namespace proxjobs

#endif  // PROXJOBS_QUANTREG_HPP
