#pragma once

#include <stdexcept>
#include <string>

namespace wreathmix {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad n, r, mass, mode, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested computation exceeds a configured size cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Conditioning on an event of probability zero was requested.
class UnconditionableError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An operation that requires a reversible kernel was given one that is not.
class NonReversibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace wreathmix
