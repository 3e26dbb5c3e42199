#pragma once

#include <stdexcept>
#include <string>

namespace qsera {

// Malformed arguments or inputs: out-of-range indices, bad masks, unparseable
// files. CLI maps these to exit code 2.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// A semantic invariant failed: degenerate rescale range, inconsistent qubit
// layout, invalid correlation matrix. CLI maps these to exit code 3.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Resource bounds exceeded (qubit or variable counts beyond the desk-scale
// caps). A kind of validation failure; CLI maps these to exit code 3.
struct CapacityError : ValidationError {
  explicit CapacityError(const std::string& msg) : ValidationError(msg) {}
};

}  // namespace qsera
