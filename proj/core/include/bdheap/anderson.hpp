#pragma once

// Tight-binding chain H = diag(U) + nearest-neighbour hopping 1 with open ends,
// compared against its transfer-matrix recursion.

#include <vector>

#include "bdheap/rng.hpp"

namespace bdheap {

struct AndersonReport {
  std::vector<double> eigenvalues; // ascending
  std::vector<double> residuals;   // |psi_{N+1}(E_k)| / ||(psi_1..psi_N)||
  double max_residual = 0.0;
  /// Same residual with the double-precision eigenvalue and recursion. It
  /// scales like eps ||psi|| / |psi_N| and is large for states localised
  /// near site 1, so it is reported but not used as the check.
  double max_residual_double = 0.0;
};

/// For every eigenvalue E of H, iterates psi_{j+1} = (E - U_j) psi_j - psi_{j-1}
/// from (psi_1, psi_0) = (1, 0). At an exact eigenvalue psi_{N+1} vanishes.
/// The eigenvalues from the dense solver are polished by Rayleigh quotient
/// iteration on H in 256-bit arithmetic, and the recursion runs at that
/// precision.
AndersonReport anderson_duality_check(const std::vector<double>& potential);

/// U_j uniform in [-w/2, w/2].
std::vector<double> random_potential(std::size_t n, double w, RngStream& rng);

} // namespace bdheap
