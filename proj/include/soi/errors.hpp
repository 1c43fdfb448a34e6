#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace soi {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument value (r <= 0, non-unit mass, empty domain, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An operation's stated precondition does not hold for its inputs.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Index points of one index set handed to another.
class KindMismatch : public Error {
 public:
  using Error::Error;
};

/// Quadrature or linear solve could not reach the requested accuracy.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace soi
