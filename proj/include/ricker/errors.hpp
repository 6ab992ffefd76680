#pragma once

#include <stdexcept>
#include <string>

namespace ricker {

// Common base so callers can catch everything thrown by this library at once.
struct RickerError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid input for an operation (NaN endpoint, negative sqrt argument,
// parameter outside the regime a formula is stated for, and similar).
struct DomainError : RickerError {
    using RickerError::RickerError;
};

// Interval division where the divisor contains zero.
struct DivisionByZeroInterval : RickerError {
    using RickerError::RickerError;
};

// Parameter interval lies outside the range where the requested construction
// is valid (for example a neighborhood formula evaluated at alpha touching 1).
struct RegimeError : RickerError {
    using RickerError::RickerError;
};

// Parameter slice is wider than the attraction radius it would need.
struct SliceTooWideError : RickerError {
    using RickerError::RickerError;
};

// Undefined coefficient index requested from one of the expression tables.
struct IndexError : RickerError {
    using RickerError::RickerError;
};

// A configured cell/edge/memory budget would be exceeded.
struct ResourceExceededError : RickerError {
    using RickerError::RickerError;
};

}  // namespace ricker
