#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace approxrank {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad inputs: wrong shapes, out-of-range parameters, oversized instances.
struct ValidationError : Error {
  using Error::Error;
};

// Failures of the numerical machinery itself.
struct NumericalError : Error {
  using Error::Error;
};

struct ShapeMismatch : ValidationError {
  using ValidationError::ValidationError;
};

struct TooLarge : ValidationError {
  using ValidationError::ValidationError;
};

struct NonPositiveEpsilon : ValidationError {
  using ValidationError::ValidationError;
};

struct NumericalFailure : NumericalError {
  using NumericalError::NumericalError;
};

struct Infeasible : NumericalError {
  using NumericalError::NumericalError;
};

struct Unbounded : NumericalError {
  using NumericalError::NumericalError;
};

struct NotPsd : NumericalError {
  using NumericalError::NumericalError;
};

// A certificate was asked for an exact decomposition it does not carry.
struct NotExact : NumericalError {
  using NumericalError::NumericalError;
};

// Entrywise sign agreement failed; carries the offending positions.
struct SignViolation : NumericalError {
  SignViolation(const std::string& msg, std::vector<std::pair<int, int>> where)
      : NumericalError(msg), violations(std::move(where)) {}
  std::vector<std::pair<int, int>> violations;
};

// Las Vegas retry budget exhausted; carries the best error seen.
struct TrialsExhausted : NumericalError {
  TrialsExhausted(const std::string& msg, int trials, double best)
      : NumericalError(msg), trials_run(trials), best_error(best) {}
  int trials_run;
  double best_error;
};

}  // namespace approxrank
