#pragma once

#include <stdexcept>
#include <string>

namespace discform {

/// Bad arguments: mismatched moduli, malformed generators, unsupported parameters.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A configured cap (group order, search size, iteration budget) was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Data that should satisfy the 1-cocycle identity does not.
class InvalidCocycleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace discform
