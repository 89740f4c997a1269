#pragma once

#include <stdexcept>
#include <string>

namespace heisrect {

// Bad arguments, arity mismatches, malformed configuration.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Non-finite values, ODE blow-up, nearest-point searches that do not settle.
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A bound that the construction is supposed to guarantee was observed to fail.
struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace heisrect
