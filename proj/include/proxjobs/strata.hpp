#ifndef PROXJOBS_STRATA_HPP
#define PROXJOBS_STRATA_HPP

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace proxjobs {

// Half-open travel-time intervals ]b0,b1], ..., ]b_{k-2},b_{k-1}] plus one
// open-ended stratum above the last boundary. The default is the standard
// seven 5-minute bands up to 30 minutes.
struct StratumSpec {
  std::vector<double> boundaries{0, 5, 10, 15, 20, 25, 30};

  std::size_t stratum_count() const { return boundaries.size(); }
  std::string label(std::size_t index) const;

  // Throws std::invalid_argument unless boundaries are finite, >= 0 and
  // strictly increasing, with at least one boundary.
  void validate() const;

  bool operator==(const StratumSpec&) const = default;
};

struct StratumId {
  std::size_t index = 0;
  std::string label;

  auto operator<=>(const StratumId& other) const { return index <=> other.index; }
  bool operator==(const StratumId& other) const { return index == other.index; }
};

// Maps a travel time in minutes to its stratum. Values at a boundary belong
// to the interval below it; values above the last boundary fall in the open
// stratum. Throws OutOfDomainError for tmfm <= first boundary (no stratum is
// defined at or below it) and std::invalid_argument for non-finite input.
StratumId stratum_of(const StratumSpec& spec, double tmfm_minutes);

}  // namespace proxjobs

#endif  // PROXJOBS_STRATA_HPP
