#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hamforge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression or file text. `position` is a 0-based character offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Division by zero, singular matrix, zero denominator after substitution.
class MathError : public Error {
 public:
  using Error::Error;
};

/// Jet order exceeded the declared maximum.
class OrderOverflow : public Error {
 public:
  using Error::Error;
};

/// Violated precondition on user-supplied data (wrong sizes, bad symbols...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

}  // namespace hamforge
