#pragma once

// Random walk on the upper half-plane generated by the three involutions of
// the Gamma_2 free product Z2 * Z2 * Z2. A reduced word of length n moves the
// base point a hyperbolic distance mu_n; the per-step growth rate is the
// Lyapunov exponent gamma.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "bdheap/rng.hpp"

namespace bdheap {

struct Isometry {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  double det() const noexcept { return a * d - b * c; }
  Isometry operator*(const Isometry& o) const;
  Isometry transpose() const noexcept { return {a, c, b, d}; }
};

/// h_0, h_1, h_2 in floating point.
std::array<Isometry, 3> gamma2_generators();

/// r + s sqrt(3) with rational r, s.
struct QSqrt3 {
  mpq_class r{0};
  mpq_class s{0};

  friend QSqrt3 operator+(const QSqrt3& x, const QSqrt3& y) { return {x.r + y.r, x.s + y.s}; }
  friend QSqrt3 operator*(const QSqrt3& x, const QSqrt3& y) {
    return {x.r * y.r + 3 * x.s * y.s, x.r * y.s + x.s * y.r};
  }
  friend bool operator==(const QSqrt3& x, const QSqrt3& y) { return x.r == y.r && x.s == y.s; }
  double to_double() const;
};

struct ExactIsometry {
  QSqrt3 a, b, c, d;

  ExactIsometry operator*(const ExactIsometry& o) const;
  friend bool operator==(const ExactIsometry&, const ExactIsometry&) = default;
  static ExactIsometry identity();
};

/// The generators with entries in Q(sqrt 3), for exact identities.
std::array<ExactIsometry, 3> gamma2_generators_exact();

/// arccosh(Tr(V V^T) / 2). Throws NumericalError if the trace is below 2
/// by more than 1e-12 relative.
double hyperbolic_distance(const Isometry& v);

/// phi_alpha = (2 alpha - 1) pi / 3.
double generator_phase(int alpha);

/// ln(5/3 + 4/3 cos(2 theta + phi_alpha)): distance gained by appending h_alpha.
double distance_increment(double theta, int alpha);

/// Direction after appending h_alpha: (cos, sin) is mapped by h_alpha^T and
/// renormalised; returned in [0, pi). Equivalent to the fractional-linear
/// action of h_{alpha~} (indices 0 and 1 exchanged) on tan theta.
double angle_update(double theta, int alpha);

struct WalkState {
  double mu = 0.0;    // accumulated distance
  double theta = 0.0; // direction, in [0, pi)
  int alpha = 0;      // index of the last generator used
  std::size_t n = 0;
};

/// Picks alpha' = alpha + 1 (probability p_plus_one) or alpha + 2 (mod 3),
/// then advances mu and theta.
WalkState walk_step(WalkState state, RngStream& rng, double p_plus_one = 0.5);

/// psi = theta + phi_alpha / 2 reduced mod pi to (-pi/2, pi/2], returned as
/// |psi|. The increment of the next step is ln(5/3 + 4/3 cos 2 psi).
double folded_angle(double theta, int next_alpha);

/// Fixed-bin histogram on [0, pi/3).
class MeasureHistogram {
public:
  explicit MeasureHistogram(std::size_t bins = 1024);

  static constexpr double upper() noexcept { return 1.0471975511965976; } // pi / 3

  void add(double x);
  void merge(const MeasureHistogram& other);

  std::size_t bins() const noexcept { return counts_.size(); }
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t clamped() const noexcept { return clamped_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  double bin_width() const noexcept { return upper() / static_cast<double>(counts_.size()); }

  /// Normalised density per bin; integrates to 1.
  std::vector<double> density() const;

  /// Sum over bins of p_bin times the bin average of f (5-point Gauss-Legendre).
  double expectation(const std::function<double(double)>& f) const;

private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
  std::uint64_t clamped_ = 0; // samples that fell outside [0, pi/3)
};

enum class GammaMethod { montecarlo, measure_integral };

struct WalkOptions {
  double p_plus_one = 0.5;
  std::size_t bins = 1024;
  double burn_in_fraction = 0.1;
  std::size_t batches_per_trial = 10;
  unsigned threads = 1;
};

struct LyapunovResult {
  double gamma = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0; // steps used after burn-in, summed over trials
  std::vector<std::string> warnings;
  MeasureHistogram histogram{1};
};

/// montecarlo: slope of mu_n against n after burn-in. measure_integral: the
/// integral of ln(5/3 + 4/3 cos 2x) against the empirical invariant measure.
/// Error bars come from batch means. n_steps must be at least 10^4.
LyapunovResult lyapunov_gamma(std::size_t n_steps, std::size_t trials, const RngStream& rng,
                              GammaMethod method, const WalkOptions& options = {});

/// Exponent of the periodic orbit alpha -> alpha + 1: (2/3) ln rho(h_1 h_2 h_0).
double deterministic_orbit_gamma();

} // namespace bdheap
