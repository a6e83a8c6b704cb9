#pragma once

#include <stdexcept>
#include <string>

namespace nopair {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments: out-of-range couplings, malformed grids, NaN inputs.
class DomainError : public Error {
 public:
  using Error::Error;
};

// LAPACK failures and ill-conditioned spectral operations.
class NumericError : public Error {
 public:
  using Error::Error;
};

// A requested accuracy could not be met (quadrature tails, fits).
class AccuracyError : public Error {
 public:
  using Error::Error;
};

// Iterative solvers that ran out of iterations or diverged.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent configuration documents.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace nopair
