#include "proxjobs/quantreg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "proxjobs/errors.hpp"

namespace proxjobs {

double check_loss_term(double residual, double tau) {
  return residual < 0.0 ? residual * (tau - 1.0) : residual * tau;
}

double check_loss(std::span<const double> residuals, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw std::invalid_argument("check_loss: tau must lie in (0,1)");
  }
  double total = 0.0;
  for (double r : residuals) {
    if (!std::isfinite(r)) {
      throw std::invalid_argument("check_loss: non-finite residual");
    }
    total += check_loss_term(r, tau);
  }
  return total;
}

namespace {

// A candidate line interpolating observations `anchor` and `partner`.
struct PairLine {
  std::size_t anchor = 0;
  std::size_t partner = 0;
  double intercept = 0.0;
  double slope = 0.0;
};

PairLine line_through(std::span<const Observation> pts, std::size_t i,
                      std::size_t j) {
  if (j < i) std::swap(i, j);
  const double slope = (pts[j].y - pts[i].y) / (pts[j].x - pts[i].x);
  const double intercept = pts[i].y - slope * pts[i].x;
  return PairLine{i, j, intercept, slope};
}

double loss_at(std::span<const Observation> pts, const PairLine& line,
               double tau) {
  double total = 0.0;
  for (const Observation& p : pts) {
    total += check_loss_term(p.y - (line.intercept + line.slope * p.x), tau);
  }
  return total;
}

void validate_points(std::span<const Observation> pts, double tau,
                     const char* who) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw std::invalid_argument(std::string(who) + ": tau must lie in (0,1)");
  }
  for (const Observation& p : pts) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument(std::string(who) +
                                  ": non-finite observation");
    }
  }
  if (pts.size() < 2) {
    throw DegenerateDesignError(std::string(who) +
                                ": need at least 2 observations, got " +
                                std::to_string(pts.size()));
  }
}

// -1 / 0 / +1 residual classes under the zero tolerance.
void classify(std::span<const Observation> pts, const PairLine& line,
              std::vector<double>& r, std::vector<int>& cls) {
  const std::size_t n = pts.size();
  r.resize(n);
  cls.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double rk = pts[k].y - (line.intercept + line.slope * pts[k].x);
    r[k] = rk;
    const double tol = residual_zero_tolerance(pts[k].y);
    cls[k] = rk > tol ? 1 : (rk < -tol ? -1 : 0);
  }
}

struct Deriv {
  double value = 0.0;
  double scale = 0.0;  // sum of |contributions|, for tolerance scaling
};

// One-sided derivative of the total loss along the edge that keeps the
// residual of `p` at zero and moves the slope in direction `s` (+1/-1).
// Points classified zero contribute their one-sided (non-negative) rate.
Deriv edge_derivative(std::span<const Observation> pts,
                      const std::vector<int>& cls, std::size_t p, int s,
                      double tau) {
  const double xp = pts[p].x;
  Deriv out;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double dk = -static_cast<double>(s) * (pts[k].x - xp);
    if (dk == 0.0) continue;
    double term;
    if (cls[k] > 0) {
      term = tau * dk;
    } else if (cls[k] < 0) {
      term = (tau - 1.0) * dk;
    } else {
      term = dk > 0.0 ? tau * dk : (tau - 1.0) * dk;
    }
    out.value += term;
    out.scale += std::abs(term);
  }
  return out;
}

struct Crossing {
  double t;
  std::size_t index;
  double jump;  // |d_k|, the derivative increase past this crossing
};

// Walks the crossings along edge (p, s) in increasing t and returns the
// first point where the cumulative one-sided derivative reaches zero.
// Returns false only for degenerate directions with no sign change ahead.
bool edge_search(std::span<const Observation> pts, const std::vector<double>& r,
                 const std::vector<int>& cls, std::size_t p, int s,
                 double initial_derivative, std::size_t& blocker) {
  const double xp = pts[p].x;
  std::vector<Crossing> crossings;
  crossings.reserve(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (cls[k] == 0) continue;
    const double dk = -static_cast<double>(s) * (pts[k].x - xp);
    if (dk == 0.0) continue;
    if ((r[k] > 0.0) == (dk > 0.0)) continue;  // moving away from zero
    crossings.push_back(Crossing{-r[k] / dk, k, std::abs(dk)});
  }
  std::sort(crossings.begin(), crossings.end(),
            [](const Crossing& a, const Crossing& b) {
              return a.t != b.t ? a.t < b.t : a.index < b.index;
            });
  double running = initial_derivative;
  for (const Crossing& c : crossings) {
    running += c.jump;
    if (running >= 0.0) {
      blocker = c.index;
      return true;
    }
  }
  return false;
}

// Zero-class indices, one representative per distinct x (edges anchored at
// equal x are the same edge).
std::vector<std::size_t> zero_representatives(
    std::span<const Observation> pts, const std::vector<int>& cls) {
  std::vector<std::size_t> zeros;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (cls[k] != 0) continue;
    bool dup = false;
    for (std::size_t z : zeros) {
      if (pts[z].x == pts[k].x) {
        dup = true;
        break;
      }
    }
    if (!dup) zeros.push_back(k);
  }
  return zeros;
}

QuantileFit build_fit(std::span<const Observation> pts, const PairLine& line,
                      double tau) {
  QuantileFit fit;
  fit.tau = tau;
  fit.intercept = line.intercept;
  fit.slope = line.slope;
  fit.n = pts.size();
  double total = 0.0;
  for (const Observation& p : pts) {
    const double rk = p.y - (line.intercept + line.slope * p.x);
    total += check_loss_term(rk, tau);
    const double tol = residual_zero_tolerance(p.y);
    if (rk > tol) {
      ++fit.n_pos;
    } else if (rk < -tol) {
      ++fit.n_neg;
    } else {
      ++fit.n_zero;
    }
  }
  fit.loss = total;
  fit.small_sample = static_cast<double>(fit.n) < 1.0 / tau;
  return fit;
}

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Improving-edge threshold: below cancellation noise a derivative is
// treated as zero.
double derivative_tolerance(double scale) { return 64.0 * kEps * (scale + 1.0); }

}  // namespace

QuantileFit fit_quantile_line(std::span<const Observation> pts, double tau) {
  validate_points(pts, tau, "fit_quantile_line");
  const std::size_t n = pts.size();

  std::size_t j0 = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (pts[j].x != pts[0].x) {
      j0 = j;
      break;
    }
  }
  if (j0 == 0) {
    throw DegenerateDesignError(
        "fit_quantile_line: all x values identical, line is not determined");
  }

  PairLine line = line_through(pts, 0, j0);
  std::vector<double> r;
  std::vector<int> cls;
  const std::size_t max_pivots = 200 * n + 2000;
  std::size_t pivots = 0;

  // Descent: pivot along the steepest improving edge until every edge
  // through the current vertex has a non-negative one-sided derivative.
  for (;;) {
    if (++pivots > max_pivots) {
      throw std::runtime_error("fit_quantile_line: pivot limit exceeded");
    }
    classify(pts, line, r, cls);
    const std::vector<std::size_t> zeros = zero_representatives(pts, cls);

    bool improving = false;
    std::size_t best_p = 0;
    int best_s = 1;
    double best_value = 0.0;
    for (std::size_t p : zeros) {
      for (int s : {+1, -1}) {
        const Deriv d = edge_derivative(pts, cls, p, s, tau);
        if (d.value < -derivative_tolerance(d.scale) &&
            (!improving || d.value < best_value)) {
          improving = true;
          best_p = p;
          best_s = s;
          best_value = d.value;
        }
      }
    }
    if (!improving) break;

    std::size_t blocker = 0;
    if (!edge_search(pts, r, cls, best_p, best_s, best_value, blocker)) {
      throw std::runtime_error(
          "fit_quantile_line: unbounded descent direction");
    }
    line = line_through(pts, best_p, blocker);
  }

  // Tie-break: among equal-loss vertices, walk slope-decreasing edges with a
  // zero derivative until the lexicographically smallest (slope, intercept)
  // optimum is reached. A move that raises the loss is a false tie; undo it.
  const double anchor_loss = loss_at(pts, line, tau);
  const double loss_budget = anchor_loss + 1e-12 * (1.0 + anchor_loss);
  for (;;) {
    if (++pivots > max_pivots) break;
    classify(pts, line, r, cls);
    const std::vector<std::size_t> zeros = zero_representatives(pts, cls);

    bool moved = false;
    for (std::size_t p : zeros) {
      const Deriv d = edge_derivative(pts, cls, p, -1, tau);
      if (std::abs(d.value) > derivative_tolerance(d.scale)) continue;
      std::size_t blocker = 0;
      if (!edge_search(pts, r, cls, p, -1, d.value, blocker)) continue;
      const PairLine candidate = line_through(pts, p, blocker);
      if (candidate.slope >= line.slope) continue;
      if (loss_at(pts, candidate, tau) > loss_budget) continue;
      line = candidate;
      moved = true;
      break;
    }
    if (!moved) break;
  }

  return build_fit(pts, line, tau);
}

QuantileFit brute_force_fit(std::span<const Observation> pts, double tau) {
  validate_points(pts, tau, "brute_force_fit");
  const std::size_t n = pts.size();
  if (n > 100) {
    throw SizeLimitError("brute_force_fit: n = " + std::to_string(n) +
                         " exceeds the enumeration cap of 100");
  }

  bool found = false;
  PairLine best;
  double best_loss = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (pts[i].x == pts[j].x) continue;
      const PairLine cand = line_through(pts, i, j);
      const double loss = loss_at(pts, cand, tau);
      const double tie_tol = 1e-12 * (1.0 + std::min(best_loss, loss));
      if (!found || loss < best_loss - tie_tol) {
        found = true;
        best = cand;
        best_loss = loss;
      } else if (loss <= best_loss + tie_tol) {
        if (cand.slope < best.slope ||
            (cand.slope == best.slope && cand.intercept < best.intercept)) {
          best = cand;
          best_loss = std::min(best_loss, loss);
        }
      }
    }
  }
  if (!found) {
    throw DegenerateDesignError(
        "brute_force_fit: all x values identical, line is not determined");
  }
  return build_fit(pts, best, tau);
}

double predict(const QuantileFit& fit, double population,
               bool clamp_nonnegative) {
  if (!std::isfinite(population) || population < 1.0) {
    throw std::invalid_argument("predict: population must be >= 1");
  }
  const double value = fit.intercept + fit.slope * std::log(population);
  if (clamp_nonnegative && value < 0.0) return 0.0;
  return value;
}

}  // namespace proxjobs
