#pragma once

#include <stdexcept>
#include <string>

namespace canetoads {

/// Invalid input to an operation (negative trait, nonpositive epsilon, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A run configuration or experiment violates one of its invariants.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A solver produced a non-finite value or failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested quantity is not available for this input (e.g. a tabulated
/// profile without a declared limit).
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A front crossing was requested but the level set leaves the grid.
class OutOfDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace canetoads
