#pragma once

// Toda chain with H = sum p_j^2 / 2 + kappa sum e^{mu_j - mu_{j+1}}.
//
// The sum-form Hamiltonian sum (P_j^2 + kappa' e^{mu_j - mu_{j+1}}) maps onto
// this one with p = 2P, kappa = 2 kappa' and H = 2 H', i.e. a rescaling of
// time; nothing else changes.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "bdheap/errors.hpp"

namespace bdheap {

enum class TodaBoundary { open, periodic };

struct TodaState {
  std::vector<double> mu;
  std::vector<double> p;
  double kappa = 1.0;
  TodaBoundary bc = TodaBoundary::open;

  std::size_t size() const noexcept { return mu.size(); }
  /// Throws DomainError on size mismatch, empty chain, negative kappa or non-finite data.
  void validate() const;
};

/// mu_j'' = kappa (e^{mu_{j-1} - mu_j} - e^{mu_j - mu_{j+1}}); missing bonds
/// are dropped for open ends and wrapped for periodic ones.
std::vector<double> toda_rhs(const TodaState& state);

double hamiltonian(const TodaState& state);
double total_momentum(const TodaState& state);

/// Raised when the state stops being finite; carries the last finite state.
class TodaIntegrationError : public NumericalError {
public:
  TodaIntegrationError(const std::string& what, TodaState last, double t)
      : NumericalError(what), last_valid(std::move(last)), time(t) {}
  TodaState last_valid;
  double time;
};

struct TodaTrajectory {
  std::vector<double> times;
  std::vector<TodaState> states;
};

/// Fourth-order symplectic (Yoshida) integration. The initial state and every
/// `sample_every`-th step are recorded; the final state is always recorded.
TodaTrajectory toda_integrate(const TodaState& state, double dt, std::size_t steps,
                              std::size_t sample_every = 0);

/// Final state only.
TodaState toda_evolve(const TodaState& state, double dt, std::size_t steps);

/// Integrates forward, flips the momenta, integrates again and flips back.
/// Returns the max absolute deviation from the initial state.
double time_reversal_error(const TodaState& state, double dt, std::size_t steps);

enum class LaxConvention {
  flow,    // symmetric Flaschka form, isospectral under toda_rhs
  printed, // the literal matrix with e^{(q_{j+1}-q_j)/2} off-diagonals and a -w corner
};

/// Diagonal -p_j. flow: off-diagonals sqrt(kappa) e^{(mu_j - mu_{j+1})/2},
/// corners (1,N) = sqrt(kappa) e^{(mu_N - mu_1)/2} / w and (N,1) = w times the same.
/// printed: off-diagonals e^{(mu_{j+1} - mu_j)/2}, corners e^{(mu_N - mu_1)/2} / w
/// and -w e^{(mu_N - mu_1)/2}. Open chains have no corners.
/// Throws DomainError for w = 0 or a periodic chain with N < 3.
Eigen::MatrixXcd lax_matrix(const TodaState& state, std::complex<double> w,
                            LaxConvention convention = LaxConvention::flow);

/// Eigenvalues sorted by real part, then imaginary part.
std::vector<std::complex<double>> lax_spectrum(const TodaState& state, std::complex<double> w,
                                               LaxConvention convention = LaxConvention::flow);

struct IsospectralityReport {
  double max_drift = 0.0;            // sorted eigenvalues, t = 0 against t = steps dt
  double energy_drift = 0.0;         // |H(t) - H(0)| / |H(0)| (absolute if H(0) = 0)
  double curve_residual = 0.0;       // see spectral_curve_residual
  std::vector<std::complex<double>> initial;
  std::vector<std::complex<double>> final;
};

IsospectralityReport isospectrality_check(const TodaState& state, std::complex<double> w,
                                          double dt, std::size_t steps,
                                          LaxConvention convention = LaxConvention::flow);

/// For sampled lambda, det(L(w) - lambda) must depend on w only through
/// w + 1/w and affinely. Returns the largest relative violation found over
/// w in {w0, 1/w0, w1} with w1 chosen off that family.
double spectral_curve_residual(const TodaState& state, std::complex<double> w0,
                               LaxConvention convention = LaxConvention::flow);

/// Trace of the 2x2 monodromy prod_{i=1..N} [[lambda + p_i, sqrt(kappa) e^{mu_i}],
/// [-sqrt(kappa) e^{-mu_i}, 0]], multiplied left to right.
double monodromy_trace(const TodaState& state, double lambda);

} // namespace bdheap
