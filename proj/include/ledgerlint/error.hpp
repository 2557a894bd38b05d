#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ledgerlint {

// Base for every error raised by the library. Financial operations throw;
// the formula evaluator converts these into ErrorValue cells.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input value (bad date, inconsistent series, invalid spec).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Arguments given out of the required order (start after end, ...).
class OrderingError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Index-like argument outside its valid range (e.g. a depreciation period).
class RangeError : public Error {
 public:
  using Error::Error;
};

// Iterative solver could not bracket a root.
class NoSolutionError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class LoadError : public Error {
 public:
  using Error::Error;
};

// Lexing/parsing failure; `offset` is the 0-based column in the formula text.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : Error(what + " at column " + std::to_string(offset + 1)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class LexError : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

class ParseError : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

}  // namespace ledgerlint
