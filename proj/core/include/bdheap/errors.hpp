#pragma once

#include <stdexcept>
#include <string>

namespace bdheap {

/// Raised when an argument lies outside the domain an operation accepts
/// (out-of-range column, non-positive beta, signed letter in a semigroup word, ...).
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a structure handed in from outside fails validation
/// (e.g. a heap whose cells violate the landing rule).
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Floating-point breakdown: degenerate factorisation, trace below 2, non-finite state.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An identity that must hold exactly did not (e.g. inexact polynomial division).
class InvariantViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace bdheap
