#pragma once

#include <stdexcept>
#include <string>

namespace junction_hj {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A declared invariant does not hold (convexity probe, turning fractions,
/// grid layout, scenario schema).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The entry time is not defined at the junction pair (0,0) when neither
/// endpoint branch attains the minimal idling cost.
class UndefinedTauError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A root find or minimization failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace junction_hj
