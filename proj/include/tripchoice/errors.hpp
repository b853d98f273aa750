#pragma once

#include <stdexcept>
#include <string>

namespace tripchoice {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data. The message carries the row location.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A model specification or parameter vector that violates the model rules.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Likelihood evaluation produced a zero probability or a non-finite value.
class NumericError : public Error {
 public:
  using Error::Error;
};

class OptimizationError : public Error {
 public:
  using Error::Error;
};

}  // namespace tripchoice
