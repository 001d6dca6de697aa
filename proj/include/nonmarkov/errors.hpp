#pragma once

#include <stdexcept>
#include <string>

namespace nonmarkov {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad labels, mismatched partitions, out-of-range parameters.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A matrix that should be a density matrix (or a channel) is not one.
class ValidityError : public Error {
 public:
  using Error::Error;
};

/// Quadrature or iterative numerics did not reach the requested tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A dimension, branch count or truncation exceeds the configured budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace nonmarkov
