#ifndef PROXJOBS_ERRORS_HPP
#define PROXJOBS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace proxjobs {

// Design matrix cannot support a line fit (n < 2 or all x identical).
class DegenerateDesignError : public std::invalid_argument {
 public:
  explicit DegenerateDesignError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Instance exceeds a hard size guard (brute-force enumeration cap).
class SizeLimitError : public std::invalid_argument {
 public:
  explicit SizeLimitError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Value is finite but outside the domain an operation is defined on,
// e.g. a travel time of 0 minutes has no stratum.
class OutOfDomainError : public std::invalid_argument {
 public:
  explicit OutOfDomainError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Model sets cannot be combined (mismatched stratum boundaries).
class IncompatibleModelsError : public std::invalid_argument {
 public:
  explicit IncompatibleModelsError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Unreadable file, schema violation, duplicate ids, unknown year tag.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace proxjobs

#endif  // PROXJOBS_ERRORS_HPP
