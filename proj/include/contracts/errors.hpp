#ifndef CONTRACTS_ERRORS_HPP
#define CONTRACTS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace contracts {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad file contents, inconsistent dimensions, parameters
/// outside their documented domain.  The CLI maps this to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed the configured work budget.  The CLI maps
/// this to exit code 3.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed (e.g. a solver certificate did not
/// re-verify).  Indicates a bug, never a bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace contracts

#endif  // CONTRACTS_ERRORS_HPP
