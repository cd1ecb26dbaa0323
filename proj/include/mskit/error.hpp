#pragma once

#include <stdexcept>
#include <string>

namespace mskit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad spec file, unknown vertex, invalid family.
class ParseError : public Error {
 public:
  using Error::Error;
};

class UnknownVertex : public Error {
 public:
  using Error::Error;
};

/// The operation is mathematically inapplicable to the given input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The input lies outside the closed-form regime needed for an exact answer.
class ExactnessUnavailable : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// h(G) = 0: classification needs finite positive entropy.
class ZeroEntropyError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class BudgetExceeded : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// A certified comparison could not be decided within the refinement cap.
class Unresolved : public Error {
 public:
  using Error::Error;
};

}  // namespace mskit
