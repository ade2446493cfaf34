#pragma once

#include <stdexcept>
#include <string>

namespace flocksim {

/// Bad user input: config files, CLI arguments, out-of-range parameters.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// The integrator detected loss of validity (positivity failure, NaN).
/// Carries the time of the last accepted state so callers can report it.
class SolverAbort : public std::runtime_error {
 public:
  SolverAbort(const std::string& what, double t_last)
      : std::runtime_error(what), t_last_(t_last) {}
  double t_last() const { return t_last_; }

 private:
  double t_last_;
};

/// A trajectory did not satisfy the convergence preconditions of the
/// flock-extraction routines.
class NotFlocked : public std::runtime_error {
 public:
  explicit NotFlocked(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical quadrature failed to reach the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace flocksim
