#pragma once

#include <stdexcept>
#include <string>

namespace turbeam {

// Bad scenario/config input (unknown key, missing field, bad value).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical routine could not reach the requested accuracy.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& msg, double best_estimate, double error_bound)
      : std::runtime_error(msg), best_estimate(best_estimate), error_bound(error_bound) {}
  double best_estimate;
  double error_bound;
};

// An operation was requested in a regime where its defining formula is
// singular (e.g. the saturated closed forms at t = 0).
class RegimeError : public std::runtime_error {
 public:
  explicit RegimeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Monte-Carlo safety cap tripped.
class SimulationError : public std::runtime_error {
 public:
  explicit SimulationError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace turbeam
