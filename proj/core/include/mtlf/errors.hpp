#pragma once

#include <stdexcept>
#include <string>

namespace mtlf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration values or unknown keys.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed, irregular or insufficient input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Dimension mismatch between a model and its inputs.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Non-finite intermediate values or a singular fusion system.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace mtlf
