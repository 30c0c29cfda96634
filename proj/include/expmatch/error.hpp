#pragma once

#include <stdexcept>
#include <string>

namespace expmatch {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed files, violated preconditions, out-of-range parameters.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A bounded computation ran out of its budget (retries, steps, samples,
/// enumeration size, eigensolver sweeps).
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace expmatch
