#pragma once

#include <stdexcept>
#include <string>

namespace zsg {

// Invalid user-supplied configuration or arguments. The CLI maps these to
// exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A quantity that needs a pure saddle point was requested on a game without
// one.
class NoPureEquilibriumError : public std::runtime_error {
 public:
  NoPureEquilibriumError() : std::runtime_error("no pure equilibrium") {}
  explicit NoPureEquilibriumError(const std::string& what)
      : std::runtime_error("no pure equilibrium: " + what) {}
};

// The LP solver gave up (pivot cap reached or numerically broken tableau).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace zsg
