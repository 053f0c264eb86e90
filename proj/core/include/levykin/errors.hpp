#pragma once

#include <stdexcept>
#include <string>

namespace levykin {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates a documented precondition (bad alpha, grid mismatch, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical contract was breached at run time (blow-up, infeasible
/// coefficient recipe, failed monotonicity gate, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Reading or writing an artifact failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace levykin
