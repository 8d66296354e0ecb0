#pragma once

#include <stdexcept>
#include <string>

namespace fracbd {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Argument inside the mathematical domain but outside what the
/// implementation evaluates (e.g. large positive Mittag-Leffler arguments).
class UnsupportedDomain : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A requested accuracy cannot be met at the given arguments.
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured resource cap (grid steps, path length) was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative numerical routine failed (non-convergence, singular system).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fracbd
