#pragma once

#include <stdexcept>

namespace evolvekit {

/// Precondition violated by a caller-supplied argument.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A quantity only defined on the closed support was requested outside it.
class OutsideSupport : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Log-magnitude of a result falls outside the representable double range.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Chi-square fit cannot be formed (empty conditional set, sparse cells).
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace evolvekit
