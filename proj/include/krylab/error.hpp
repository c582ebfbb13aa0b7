#pragma once

#include <stdexcept>
#include <string>

namespace krylab {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes that do not line up (dimension of a vector vs. an operator, ragged JSON rows).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A value outside the documented domain of an operation (index out of range,
// non-unit cyclic vector, diagonal entry outside [0, 1]).
class DomainError : public Error {
 public:
  using Error::Error;
};

// An internal numerical routine failed or an asserted identity did not hold.
class NumericFailure : public Error {
 public:
  using Error::Error;
};

// Malformed run configuration or solver budget.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace krylab
