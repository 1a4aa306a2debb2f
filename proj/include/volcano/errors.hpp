#pragma once

#include <stdexcept>

namespace volcano {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated by the caller.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The requested value lies outside the representable double range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure ran out of budget before meeting its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace volcano
