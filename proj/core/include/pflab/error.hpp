#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pflab {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range configuration (bad grid size, unknown key, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A physical parameter outside its domain (a <= 0, R <= 0, omega <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A problem too large for the configured budget. Carries the offending dimension.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, unsigned long long dimension)
      : Error(what), dimension_(dimension) {}
  unsigned long long dimension() const noexcept { return dimension_; }

 private:
  unsigned long long dimension_;
};

/// Eigensolver failed to reach the requested residual.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double best_residual)
      : Error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

/// Self-consistent iteration did not converge within its iteration limit.
class IterationError : public Error {
 public:
  IterationError(const std::string& what, std::vector<double> history)
      : Error(what), history_(std::move(history)) {}
  const std::vector<double>& residual_history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

/// API misuse, e.g. asking for length-gauge-only quantities on a velocity-gauge operator.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace pflab
