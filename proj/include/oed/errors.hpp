#pragma once

#include <stdexcept>
#include <string>

namespace oed {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument passed to an operation (size mismatch, out-of-range value).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A matrix required to be (numerically) positive definite is not.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

// Scalar map applied outside its domain (log / inverse square root of a
// nonpositive eigenvalue).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Iterative procedure failed to converge or a root bracket collapsed.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Operation invoked on an object in an unusable state (e.g. a simplex
// iterate whose mass vanished).
class StateError : public Error {
 public:
  using Error::Error;
};

// File parsing / malformed input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// Experiment configuration problems (CLI layer).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace oed
