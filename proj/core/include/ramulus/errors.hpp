#pragma once

#include <stdexcept>
#include <string>

namespace ramulus {

/// Base of every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

/// Input outside the mathematical domain of an operation (unbalanced
/// boundary, zero vector, coincident points, ...).
class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "domain_error"; }
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "precondition_error"; }
};

/// Instance too large for exhaustive treatment (atom cap).
class CapacityError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "capacity_error"; }
};

/// A chain could not be split into source-to-sink paths.
class DecompositionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "decomposition_error"; }
};

}  // namespace ramulus
