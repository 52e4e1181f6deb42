#pragma once

#include <stdexcept>
#include <string>

namespace opolab {

/// Raised when a configuration file or CLI argument is malformed.
/// Maps to process exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an iterative solver hits its iteration cap without meeting
/// its stopping rule. Maps to process exit code 4.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Physics-domain violations (above-threshold pump, efficiency <= 0.5 for
// inversion, negative squeezing, ...) use std::domain_error and map to
// exit code 3. Interface-contract violations (unnormalized states, length
// mismatches) use std::invalid_argument.

}  // namespace opolab
