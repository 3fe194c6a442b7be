#pragma once

// Ensemble statistics of deposition runs: the interface width
// W(T) = sqrt((1/N) sum_i (<h_i^2> - <h_i>^2)), growth and roughness
// exponents, scaling collapse in u = tau / N^{3/2}, and height moments.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bdheap/deposition.hpp"
#include "bdheap/fit.hpp"
#include "bdheap/rng.hpp"

namespace bdheap {

// Exact accumulator type for sums of squared heights.
__extension__ typedef __int128 wide_int;

/// ensemble: Var over runs of h_i, the literal definition, which also picks
/// up the diffusion of the mean height and so keeps growing once the
/// interface has saturated. centered: Var over runs of h_i - hbar, with hbar
/// the spatial mean of the same run; this one saturates.
enum class WidthKind { ensemble, centered };

/// Per-column sums of h and h^2 over runs at a list of checkpoints (event
/// counts T). Sums are exact integers, so merging is associative and
/// commutative bit for bit.
class EnsembleAccumulator {
public:
  EnsembleAccumulator(std::size_t n_columns, std::vector<std::size_t> checkpoints);

  std::size_t n_columns() const noexcept { return n_; }
  const std::vector<std::size_t>& checkpoints() const noexcept { return checkpoints_; }
  std::size_t runs(std::size_t checkpoint_index) const { return runs_.at(checkpoint_index); }

  void add(std::size_t checkpoint_index, const HeightProfile& profile);
  void merge(const EnsembleAccumulator& other);

  /// Index of checkpoint T; throws DomainError if T is not a checkpoint.
  std::size_t index_of(std::size_t t) const;

  /// (1/N) sum_i Var(h_i) at a checkpoint index (population variance over runs).
  double mean_column_variance(std::size_t checkpoint_index,
                              WidthKind kind = WidthKind::ensemble) const;
  /// Ensemble mean of the column-averaged height.
  double mean_height(std::size_t checkpoint_index) const;

  friend bool operator==(const EnsembleAccumulator&, const EnsembleAccumulator&) = default;

private:
  std::size_t n_;
  std::vector<std::size_t> checkpoints_;
  std::vector<std::size_t> runs_;
  std::vector<wide_int> s1_; // checkpoint-major, N per checkpoint
  std::vector<wide_int> s2_;
  std::vector<wide_int> c1_; // sums of N h_i - sum_j h_j
  std::vector<wide_int> c2_;
};

/// Width at checkpoint T. Throws ValidationError with fewer than two runs.
double width(const EnsembleAccumulator& acc, std::size_t t,
             WidthKind kind = WidthKind::ensemble);

struct WidthPoint {
  double tau; // T / N
  double width;
};

struct WidthSeries {
  std::size_t n_columns = 0;
  std::vector<WidthPoint> points; // tau strictly increasing
};

WidthSeries width_series(const EnsembleAccumulator& acc, WidthKind kind = WidthKind::ensemble);

/// Event counts T = round(tau N) for `count` log-spaced tau in [tau_min, tau_max],
/// deduplicated.
std::vector<std::size_t> log_spaced_checkpoints(std::size_t n_columns, double tau_min,
                                                double tau_max, std::size_t count);

struct EnsembleConfig {
  std::size_t n_columns = 64;
  std::vector<std::size_t> checkpoints;
  std::size_t runs = 100;
  Boundary boundary = Boundary::free;
  unsigned threads = 1;
  std::size_t sample_stride = 0; // >0: keep h at columns 1, 1+stride, ... per checkpoint
};

struct EnsembleResult {
  EnsembleAccumulator accumulator;
  std::vector<std::vector<std::int64_t>> column_samples; // per checkpoint
  std::vector<std::vector<std::int64_t>> max_heights;    // per checkpoint, one per run
};

/// Run r draws its columns from rng.child(r).
EnsembleResult simulate_ensemble(const EnsembleConfig& config, const RngStream& rng);

struct FitResult {
  double exponent = 0.0;
  double std_error = 0.0;
  double window_min = 0.0;
  double window_max = 0.0;
  double residual_norm = 0.0;
  std::size_t points = 0;
  std::vector<std::string> warnings;
};

/// Slope of ln W against ln tau over tau in [tau_min, tau_max].
FitResult growth_exponent(const WidthSeries& series, double tau_min, double tau_max);

/// Same with the window given in u = tau / N^{3/2}.
FitResult growth_exponent_u(const WidthSeries& series, double u_min, double u_max);

struct CollapseCurve {
  std::size_t n_columns;
  std::vector<double> u;
  std::vector<double> scaled_width; // W / N^{1/2}
};

struct CollapseReport {
  std::vector<CollapseCurve> curves;
  bool comparable = false;   // the u-ranges overlap
  double overlap_min = 0.0;
  double overlap_max = 0.0;
  double mismatch = 0.0;     // max over grid points of (max - min) / mean
  FitResult roughness;       // ln W_sat against ln N
};

/// Needs at least three sizes. The mismatch is evaluated on `grid_points`
/// log-spaced u in the overlap, interpolating each curve linearly in
/// (ln u, ln W). Saturated widths average the points with u > u_saturation.
CollapseReport collapse(const std::vector<WidthSeries>& series, std::size_t grid_points = 24,
                        double u_saturation = 3.0);

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;        // unbiased
  double skewness = 0.0;        // adjusted Fisher-Pearson G1
  double excess_kurtosis = 0.0; // adjusted G2
  double skewness_se = 0.0;
  double kurtosis_se = 0.0;
  std::vector<std::string> warnings;
};

/// Skewness and kurtosis are reported as 0 for constant input.
Moments height_moments(const std::vector<double>& samples);

/// tau^{-1/3} (h - v tau) for each sample.
std::vector<double> rescale_heights(const std::vector<std::int64_t>& h, double tau, double v);

/// Reference values of the GOE Tracy-Widom distribution.
inline constexpr double kTwGoeSkewness = 0.2935;
inline constexpr double kTwGoeExcessKurtosis = 0.1652;

} // namespace bdheap
