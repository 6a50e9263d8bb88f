#pragma once

#include <stdexcept>
#include <string>

namespace curvlab {

// Error hierarchy shared by the library and the CLI.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Non-finite or invariant-violating data.
class InvalidInput : public Error {
public:
  using Error::Error;
};

// Dimension outside an operation's admissible range.
class InvalidDimension : public Error {
public:
  using Error::Error;
};

// Vector tuple too far from orthonormal to repair.
class InvalidFrame : public Error {
public:
  using Error::Error;
};

// Operands with incompatible dimensions.
class DimensionMismatch : public Error {
public:
  using Error::Error;
};

// File decode/encode failures.
class IOError : public Error {
public:
  using Error::Error;
};

}  // namespace curvlab
