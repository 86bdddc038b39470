#ifndef PROXJOBS_DATA_IO_HPP
#define PROXJOBS_DATA_IO_HPP

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "proxjobs/modelset.hpp"
#include "proxjobs/strata.hpp"

namespace proxjobs {

// One census record. Year tags are free text ("1999", "2006", ...).
struct Municipality {
  std::string id;
  std::map<std::string, long long> population;
  std::map<std::string, long long> service_jobs;
  double tmfm_minutes = 0.0;  // travel time to the most frequented municipality
};

struct RowWarning {
  std::size_t line = 0;  // 1-based file line (header is line 1)
  std::string reason;
};

struct Dataset {
  std::vector<Municipality> municipalities;
  std::vector<std::string> years;  // year tags present in the schema, sorted
  std::string provenance;
  std::vector<RowWarning> row_warnings;
};

// CSV schema (header required, UTF-8, comma-separated):
//   id,population_1999,jobs_1999,population_2006,jobs_2006,
//   population_2008,jobs_2008,tmfm_minutes
// Columns may appear in any order. Each year needs both its population_ and
// jobs_ column; at least one year pair is required. Cells of optional years
// may be empty. Malformed rows are skipped and recorded in row_warnings;
// duplicate ids abort the load with a DataError.
Dataset load_municipalities(const std::filesystem::path& path);

// Writes the same schema; year columns are the sorted union of year tags.
void write_municipalities(const Dataset& dataset,
                          const std::filesystem::path& path);

// Observations grouped by stratum plus the bookkeeping of what was left out.
struct ObservationSet {
  std::string year;
  StratumSpec spec;
  StratumObservations by_stratum;
  std::size_t included = 0;
  std::map<std::string, std::size_t> exclusions;  // reason -> count
  std::vector<std::string> warnings;              // e.g. jobs/inhabitant > 1
};

// Emits one Observation(x = ln population, y = jobs/population) per
// municipality with 1 <= population(year) < population_cap and tmfm inside a
// stratum. Exclusion reasons: "missing year data", "population zero",
// "population cap", "tmfm not positive". Throws DataError for a year tag the
// dataset does not carry.
ObservationSet to_observations(const Dataset& dataset, const std::string& year,
                               const StratumSpec& spec = StratumSpec{},
                               long long population_cap = 5000);

}  // namespace proxjobs

#endif  // PROXJOBS_DATA_IO_HPP
