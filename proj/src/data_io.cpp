#include "proxjobs/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_set>

#include "proxjobs/csv.hpp"
#include "proxjobs/errors.hpp"

namespace proxjobs {

namespace {

struct YearColumns {
  std::size_t population = 0;
  std::size_t jobs = 0;
};

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

Dataset load_municipalities(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }

  std::string header_line;
  if (!std::getline(in, header_line)) {
    throw DataError(path.string() + ": empty file, expected a CSV header");
  }
  const std::vector<std::string> header = csv::split_line(strip_cr(header_line));

  std::size_t id_col = header.size();
  std::size_t tmfm_col = header.size();
  std::map<std::string, YearColumns> year_cols;
  std::set<std::string> pop_years, job_years;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string& name = header[c];
    if (name == "id") {
      id_col = c;
    } else if (name == "tmfm_minutes") {
      tmfm_col = c;
    } else if (name.rfind("population_", 0) == 0) {
      const std::string year = name.substr(11);
      year_cols[year].population = c;
      pop_years.insert(year);
    } else if (name.rfind("jobs_", 0) == 0) {
      const std::string year = name.substr(5);
      year_cols[year].jobs = c;
      job_years.insert(year);
    }
  }
  if (id_col == header.size()) {
    throw DataError(path.string() + ": missing required column 'id'");
  }
  if (tmfm_col == header.size()) {
    throw DataError(path.string() + ": missing required column 'tmfm_minutes'");
  }
  for (const auto& [year, cols] : year_cols) {
    if (pop_years.count(year) == 0) {
      throw DataError(path.string() + ": column jobs_" + year +
                      " has no matching population_" + year);
    }
    if (job_years.count(year) == 0) {
      throw DataError(path.string() + ": column population_" + year +
                      " has no matching jobs_" + year);
    }
  }
  if (year_cols.empty()) {
    throw DataError(path.string() +
                    ": need at least one population_<year>/jobs_<year> pair");
  }

  Dataset ds;
  ds.provenance = path.string();
  for (const auto& [year, cols] : year_cols) ds.years.push_back(year);

  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> fields = csv::split_line(line);
    if (fields.size() != header.size()) {
      ds.row_warnings.push_back(
          {line_no, "wrong field count (" + std::to_string(fields.size()) +
                        " of " + std::to_string(header.size()) + ")"});
      continue;
    }

    Municipality m;
    m.id = fields[id_col];
    if (m.id.empty()) {
      ds.row_warnings.push_back({line_no, "empty id"});
      continue;
    }

    if (!csv::parse_double(fields[tmfm_col], m.tmfm_minutes) ||
        !std::isfinite(m.tmfm_minutes)) {
      ds.row_warnings.push_back({line_no, "unparseable tmfm_minutes"});
      continue;
    }
    if (m.tmfm_minutes < 0.0) {
      ds.row_warnings.push_back({line_no, "negative tmfm_minutes"});
      continue;
    }

    bool row_ok = true;
    for (const auto& [year, cols] : year_cols) {
      const std::string& pop_field = fields[cols.population];
      const std::string& jobs_field = fields[cols.jobs];
      const bool pop_empty = pop_field.empty();
      const bool jobs_empty = jobs_field.empty();
      if (pop_empty && jobs_empty) continue;  // year absent for this row
      if (pop_empty != jobs_empty) {
        ds.row_warnings.push_back({line_no, "incomplete year " + year +
                                                " (one of population/jobs "
                                                "missing)"});
        row_ok = false;
        break;
      }
      long long pop = 0, jobs = 0;
      if (!csv::parse_int(pop_field, pop)) {
        ds.row_warnings.push_back({line_no, "unparseable population_" + year});
        row_ok = false;
        break;
      }
      if (!csv::parse_int(jobs_field, jobs)) {
        ds.row_warnings.push_back({line_no, "unparseable jobs_" + year});
        row_ok = false;
        break;
      }
      if (pop < 0) {
        ds.row_warnings.push_back({line_no, "negative population_" + year});
        row_ok = false;
        break;
      }
      if (jobs < 0) {
        ds.row_warnings.push_back({line_no, "negative jobs_" + year});
        row_ok = false;
        break;
      }
      m.population[year] = pop;
      m.service_jobs[year] = jobs;
    }
    if (!row_ok) continue;

    if (!seen_ids.insert(m.id).second) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": duplicate id '" + m.id + "'");
    }
    ds.municipalities.push_back(std::move(m));
  }
  return ds;
}

void write_municipalities(const Dataset& dataset,
                          const std::filesystem::path& path) {
  std::set<std::string> year_set(dataset.years.begin(), dataset.years.end());
  for (const Municipality& m : dataset.municipalities) {
    for (const auto& [year, _] : m.population) year_set.insert(year);
    for (const auto& [year, _] : m.service_jobs) year_set.insert(year);
  }

  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }

  std::vector<std::string> header{"id"};
  for (const std::string& year : year_set) {
    header.push_back("population_" + year);
    header.push_back("jobs_" + year);
  }
  header.push_back("tmfm_minutes");
  out << csv::join_line(header) << "\n";

  for (const Municipality& m : dataset.municipalities) {
    std::vector<std::string> fields{m.id};
    for (const std::string& year : year_set) {
      auto pit = m.population.find(year);
      auto jit = m.service_jobs.find(year);
      fields.push_back(pit == m.population.end()
                           ? ""
                           : std::to_string(pit->second));
      fields.push_back(jit == m.service_jobs.end()
                           ? ""
                           : std::to_string(jit->second));
    }
    fields.push_back(csv::format_double(m.tmfm_minutes));
    out << csv::join_line(fields) << "\n";
  }
  if (!out) {
    throw DataError("failed while writing " + path.string());
  }
}

ObservationSet to_observations(const Dataset& dataset, const std::string& year,
                               const StratumSpec& spec,
                               long long population_cap) {
  spec.validate();
  if (std::find(dataset.years.begin(), dataset.years.end(), year) ==
      dataset.years.end()) {
    std::string known;
    for (const std::string& y : dataset.years) {
      if (!known.empty()) known += ", ";
      known += y;
    }
    throw DataError("unknown year tag '" + year + "' (dataset has: " + known +
                    ")");
  }

  ObservationSet out;
  out.year = year;
  out.spec = spec;
  for (const Municipality& m : dataset.municipalities) {
    auto pit = m.population.find(year);
    auto jit = m.service_jobs.find(year);
    if (pit == m.population.end() || jit == m.service_jobs.end()) {
      ++out.exclusions["missing year data"];
      continue;
    }
    const long long pop = pit->second;
    if (pop == 0) {
      ++out.exclusions["population zero"];
      continue;
    }
    if (pop >= population_cap) {
      ++out.exclusions["population cap"];
      continue;
    }
    if (m.tmfm_minutes <= spec.boundaries.front()) {
      ++out.exclusions["tmfm not positive"];
      continue;
    }
    const StratumId stratum = stratum_of(spec, m.tmfm_minutes);
    Observation obs;
    obs.x = std::log(static_cast<double>(pop));
    obs.y = static_cast<double>(jit->second) / static_cast<double>(pop);
    if (obs.y > 1.0) {
      out.warnings.push_back("municipality " + m.id + ": " +
                             csv::format_double(obs.y) +
                             " service jobs per inhabitant in " + year);
    }
    out.by_stratum[stratum.index].push_back(obs);
    ++out.included;
  }
  if (auto it = out.exclusions.find("tmfm not positive");
      it != out.exclusions.end()) {
    out.warnings.push_back(
        std::to_string(it->second) +
        " municipalities excluded: tmfm at or below the first boundary");
  }
  return out;
}

}  // namespace proxjobs
