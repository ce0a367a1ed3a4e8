#pragma once

#include <stdexcept>
#include <string>

namespace tensorange {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes, dimensions or subsystem sets that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix that was required to be symmetric is not, beyond tolerance.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// Malformed arguments that are not dimension related (empty lists, bad
/// scalars, zero bases, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed or unreadable input files.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace tensorange
