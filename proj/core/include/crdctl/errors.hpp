#pragma once
#include <stdexcept>
#include <string>

namespace crdctl {

/// Invalid or inconsistent configuration (bad experiment file, plant/controller
/// mismatch, degenerate grid). Maps to CLI exit code 3.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure (singular operator, non-finite state where finiteness is
/// required, failed estimation). Maps to CLI exit code 4.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace crdctl
