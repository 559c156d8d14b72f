#pragma once

#include <stdexcept>
#include <string>

namespace spinnav {

// Integration blow-up, step-size underflow, non-finite amplitudes.
// Carries the time at which the failure occurred.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double t)
      : std::runtime_error(what + " (t = " + std::to_string(t) + ")"), time(t) {}
  double time;
};

// No route satisfies the constraints, or a search bracket was not found.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spinnav
