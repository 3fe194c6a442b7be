#pragma once

#include <cstddef>
#include <span>

namespace bdheap {

/// Ordinary least-squares line y = intercept + slope * x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
  double residual_norm = 0.0; // sqrt of the residual sum of squares
  std::size_t n = 0;
};

/// Throws DomainError for fewer than two points, mismatched sizes or constant x.
/// Standard errors are zero when n == 2.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

} // namespace bdheap
