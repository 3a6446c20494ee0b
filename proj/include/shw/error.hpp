#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shw {

/// Base class of every error raised by the workbench.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A table is malformed: wrong shape, entry out of range, duplicate labels.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// An operation was requested that the algebra's signature does not provide.
class SignatureError : public Error {
 public:
  using Error::Error;
};

/// Bad user input: unknown key, unbound variable, bad scheme, bad file.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Precondition on the mathematical object violated (e.g. non-simple input).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace shw
