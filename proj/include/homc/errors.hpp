#pragma once

#include <stdexcept>
#include <string>

namespace homc {

// Base class for every error this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ---- usage / input errors (CLI exit code 2) --------------------------------

// Bad input: malformed files, invalid indices, unsupported shapes.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Two tensors that must share a shape do not.
class ShapeMismatch : public UsageError {
 public:
  using UsageError::UsageError;
};

// An index or tuple component is outside its valid range.
class OutOfRange : public UsageError {
 public:
  using UsageError::UsageError;
};

// A requested dense computation would exceed the desk-scale entry guard.
class GuardExceeded : public UsageError {
 public:
  using UsageError::UsageError;
};

// An operation restricted to a specific tensor order received another.
class WrongOrder : public UsageError {
 public:
  using UsageError::UsageError;
};

// Malformed chain file, non-stochastic tensor on load, unknown fixture name.
class InputError : public UsageError {
 public:
  using UsageError::UsageError;
};

// ---- domain errors (CLI exit code 1) ---------------------------------------

// The input was well-formed but the chain does not admit the requested
// quantity (or an iteration cap was hit before a verdict).
class DomainError : public Error {
 public:
  using Error::Error;
};

// The mean-first-passage system is numerically singular; only ergodic chains
// admit a solution.
class NonErgodicChain : public DomainError {
 public:
  using DomainError::DomainError;
};

// An iteration hit its cap before meeting its convergence criterion.
class NotConverged : public DomainError {
 public:
  using DomainError::DomainError;
};

// The null-space stationary method found no nonnegative normalized vector.
class NoNonnegativeVectorFound : public DomainError {
 public:
  using DomainError::DomainError;
};

// Mutual reachability failed transitivity on the given chain; reported
// rather than silently repaired.
class InconsistentRelation : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace homc
