#include "proxjobs/strata.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "proxjobs/csv.hpp"
#include "proxjobs/errors.hpp"

namespace proxjobs {

void StratumSpec::validate() const {
  if (boundaries.empty()) {
    throw std::invalid_argument("StratumSpec: need at least one boundary");
  }
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    if (!std::isfinite(boundaries[i]) || boundaries[i] < 0.0) {
      throw std::invalid_argument(
          "StratumSpec: boundaries must be finite and >= 0");
    }
    if (i > 0 && boundaries[i] <= boundaries[i - 1]) {
      throw std::invalid_argument(
          "StratumSpec: boundaries must be strictly increasing");
    }
  }
}

std::string StratumSpec::label(std::size_t index) const {
  if (index + 1 >= boundaries.size()) {
    return ">" + csv::format_double(boundaries.back());
  }
  return "]" + csv::format_double(boundaries[index]) + "," +
         csv::format_double(boundaries[index + 1]) + "]";
}

StratumId stratum_of(const StratumSpec& spec, double tmfm_minutes) {
  spec.validate();
  if (!std::isfinite(tmfm_minutes)) {
    throw std::invalid_argument("stratum_of: tmfm must be finite");
  }
  if (tmfm_minutes <= spec.boundaries.front()) {
    throw OutOfDomainError("stratum_of: no stratum contains tmfm = " +
                           csv::format_double(tmfm_minutes) +
                           " (first interval is left-open at " +
                           csv::format_double(spec.boundaries.front()) + ")");
  }
  // First boundary >= value closes the interval the value belongs to.
  auto it = std::lower_bound(spec.boundaries.begin() + 1,
                             spec.boundaries.end(), tmfm_minutes);
  std::size_t index;
  if (it == spec.boundaries.end()) {
    index = spec.stratum_count() - 1;  // open-ended stratum
  } else {
    index = static_cast<std::size_t>(it - spec.boundaries.begin()) - 1;
  }
  return StratumId{index, spec.label(index)};
}

}  // namespace proxjobs
