#ifndef PROXJOBS_CSV_HPP
#define PROXJOBS_CSV_HPP

#include <string>
#include <vector>

namespace proxjobs::csv {

// Splits one CSV record into fields. Handles double-quoted fields with
// embedded commas and "" escapes; does not handle embedded newlines.
std::vector<std::string> split_line(const std::string& line);

// Joins fields into one CSV record, quoting only where required.
std::string join_line(const std::vector<std::string>& fields);

// Shortest round-trip decimal rendering of a double.
std::string format_double(double value);

// Strict full-field parses; return false on any trailing garbage.
bool parse_double(const std::string& field, double& out);
bool parse_int(const std::string& field, long long& out);

}  // namespace proxjobs::csv

#endif  // PROXJOBS_CSV_HPP
