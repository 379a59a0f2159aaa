#pragma once

#include <stdexcept>
#include <string>

namespace diophnet {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dimension or arity mismatch between operands.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A NaN/Inf entered or left an operation.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Checked integer arithmetic overflowed.
class ArithmeticError : public Error {
 public:
  using Error::Error;
};

// Linearly dependent lattice basis.
class RankError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or version-mismatched model file.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace diophnet
