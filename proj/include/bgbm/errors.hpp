#pragma once

#include <stdexcept>
#include <string>

namespace bgbm {

// Base of every error the library throws. Callers that only care about
// success/failure catch this; the CLI maps the subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument's value was violated (mu_a >= mu_b,
// nonpositive price, y < 1 for the ratio CDF, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Sequences that must share a grid have different lengths.
class InputShapeError : public Error {
 public:
  using Error::Error;
};

// Malformed or empty input files and tables.
class InputError : public Error {
 public:
  using Error::Error;
};

// Too few observations for the requested statistic.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// Data that make a statistic undefined (zero variance, singular covariance).
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

// Quadrature or root-finding failed, or a quantity that is nonnegative in
// exact arithmetic came out negative beyond the clamp window.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double achieved = 0.0)
      : Error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace bgbm
