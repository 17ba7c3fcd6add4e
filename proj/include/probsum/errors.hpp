#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace probsum {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violated a documented precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A value exceeded the largest finite number of the emulated format.
/// An overflowed summation trial is meaningless for the error model, so this
/// is a hard error; `index` carries the 1-based step at which it occurred
/// when known, -1 otherwise.
class OverflowError : public Error {
 public:
  OverflowError(double value, const std::string& what) : Error(what), value(value) {}
  double value;
  std::int64_t index = -1;
};

/// Relative perturbation bounds are undefined at zero.
class ZeroInputError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class OrderRangeError : public Error {
 public:
  using Error::Error;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

/// A bound that needs the partial-sum norm was called without one.
class MissingNormError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace probsum
