#pragma once

#include <stdexcept>
#include <string>

namespace smc {

// Base of every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Index outside a tensor's declared shape, or mismatched shapes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Input violates a documented precondition (non-finite values, asymmetric matrix, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Not enough data to run an estimator (N < K, empty dictionary, ...).
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// An iterative solver failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration: unknown key, type mismatch, incompatible policy.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Sensor window placed outside the scene.
class PositionError : public Error {
 public:
  using Error::Error;
};

}  // namespace smc
