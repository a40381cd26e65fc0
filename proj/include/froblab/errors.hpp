#pragma once

#include <stdexcept>
#include <string>

namespace froblab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad field label, unparsable polynomial, violated precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed the configured evaluation-step cap.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A checked mathematical invariant failed at run time.
class PropertyViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace froblab
