#pragma once

#include <stdexcept>
#include <string>

namespace sieveroc {

// Malformed or unusable input data (CSV problems, impossible queries on a
// fitted model, horizons outside the observed range, ...).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Optimizer could not produce a usable fit (invalid starting point, or a
// bootstrap run with too many failed replicates).
struct ConvergenceError : std::runtime_error {
  explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sieveroc
