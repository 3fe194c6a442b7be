#pragma once

// Yablonskii-Vorob'ev polynomials and the rational solutions of Painleve II
// built from them, all in exact arithmetic.

#include <vector>

#include "bdheap/rational.hpp"

namespace bdheap {

/// Q_0 .. Q_{j_max} from Q_{-1} = Q_0 = 1, Q_1 = z and
/// Q_{j+1} Q_{j-1} = z Q_j^2 - 4 (Q_j'' Q_j - Q_j'^2).
/// Throws InvariantViolation if a division leaves a remainder.
std::vector<RationalPoly> yablonskii(int j_max);

/// Numerator of w'' - 2 w^3 - z w - j for w = Q_{j-1}'/Q_{j-1} - Q_j'/Q_j,
/// multiplied through by (Q_{j-1} Q_j)^3. Zero exactly when w solves Painleve II.
/// j >= 0; Q_{-1} = 1 for j = 0.
RationalPoly painleve2_residual(int j);

/// Same, reusing a precomputed table Q_0 .. Q_m with m >= j.
RationalPoly painleve2_residual(const std::vector<RationalPoly>& q, int j);

struct SigmaGaugeOptions {
  GaussianRational a{mpq_class(0), mpq_class(1, 2)}; // i/2
  int exponent_sign = +1;                            // sigma_j = A^{sign * j^2} Q_j
};

struct SigmaGaugeReport {
  bool passed = false;
  GaussianPoly pq;                    // sigma_{-1} sigma_1
  bool pq_is_minus_z_over_4 = false;
  std::vector<GaussianPoly> residuals; // j = 1 .. j_max - 1
};

/// Checks sigma_j'' sigma_j - sigma_j'^2 = sigma_{j+1} sigma_{j-1} - p q sigma_j^2
/// for j = 1 .. j_max - 1 with p = sigma_{-1}, q = sigma_1.
SigmaGaugeReport sigma_gauge_check(int j_max, const SigmaGaugeOptions& options = {});

} // namespace bdheap
