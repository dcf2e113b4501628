#pragma once

#include <stdexcept>
#include <string>

namespace isoprof {

/// Rejected input: malformed model files, out-of-range parameters,
/// violated preconditions.  Maps to CLI exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: Newton divergence, continuation breakdown,
/// uncovered volume ranges.  Maps to CLI exit code 3.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace isoprof
