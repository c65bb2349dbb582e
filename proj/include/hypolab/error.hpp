#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hypolab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operator mini-language rejection. `position()` is a 0-based byte offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A documented precondition of an operation does not hold.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration (unknown key, out-of-range value, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Something that must not happen did (e.g. a singular tridiagonal system).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace hypolab
