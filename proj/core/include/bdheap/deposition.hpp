#pragma once

// Next-nearest-neighbour ballistic deposition on N columns.
//
// Columns are 1-based throughout the public API so that column i is the
// generator g_i of the word engine. A dropped cell in column i lands at
// one plus the highest of the column and its present neighbours; with free
// boundaries the missing neighbour of column 1 or N is simply omitted.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bdheap/rng.hpp"

namespace bdheap {

enum class Boundary { free, periodic };

using Column = std::size_t; // 1-based

/// Column heights h_1..h_N. Hard (integer) mode for the exact rule,
/// real-valued for the finite-temperature rule.
template <class T>
struct BasicHeightProfile {
  std::vector<T> heights;

  BasicHeightProfile() = default;
  explicit BasicHeightProfile(std::size_t n_columns) : heights(n_columns, T{}) {}
  explicit BasicHeightProfile(std::vector<T> h) : heights(std::move(h)) {}

  std::size_t n_columns() const noexcept { return heights.size(); }
  T operator[](Column c) const { return heights[c - 1]; }
  T max() const;

  friend bool operator==(const BasicHeightProfile&, const BasicHeightProfile&) = default;
};

using HeightProfile = BasicHeightProfile<std::int64_t>;
using SoftProfile = BasicHeightProfile<double>;

/// Event list i_1..i_T, each entry a 1-based column.
struct ColumnSequence {
  std::vector<Column> events;
  std::size_t size() const noexcept { return events.size(); }
  friend bool operator==(const ColumnSequence&, const ColumnSequence&) = default;
};

/// Throws DomainError unless every event lies in [1, n_columns].
void validate_events(const ColumnSequence& seq, std::size_t n_columns);

/// Exact landing rule; the returned profile differs from `profile` in `column` only.
HeightProfile deposit_hard(HeightProfile profile, Column column, Boundary bc = Boundary::free);

/// In-place variant used by the simulation loops.
void deposit_hard_inplace(std::span<std::int64_t> heights, Column column, Boundary bc);

HeightProfile replay_hard(std::size_t n_columns, const ColumnSequence& seq,
                          Boundary bc = Boundary::free);

struct SimulationResult {
  HeightProfile profile;
  ColumnSequence events;
};

/// T uniform drops on N initially empty columns.
SimulationResult simulate(std::size_t n_columns, std::size_t n_events, RngStream& rng,
                          Boundary bc = Boundary::free);

/// One row of the trajectory CSV: time, column dropped, current max height and
/// the single-run spatial variance of the profile.
struct TrajectoryRow {
  std::size_t t;
  Column column;
  std::int64_t h_max;
  double width2;
};

/// As simulate(), additionally sampling a TrajectoryRow every `stride` events
/// (and always at the last event).
SimulationResult simulate_recorded(std::size_t n_columns, std::size_t n_events, RngStream& rng,
                                   Boundary bc, std::size_t stride,
                                   std::vector<TrajectoryRow>& rows);

/// Finite-temperature rule: h <- (1/beta) ln(sum over the present
/// neighbourhood of e^{beta h}) + 1, evaluated as a log-sum-exp.
SoftProfile deposit_soft(SoftProfile profile, Column column, double beta,
                         Boundary bc = Boundary::free);

SoftProfile replay_soft(std::size_t n_columns, const ColumnSequence& seq, double beta,
                        Boundary bc = Boundary::free);

/// Log partition functions ln a_i(t) of a directed polymer on the random
/// lattice generated by the drops, at inverse temperature beta = ln u.
struct PolymerState {
  std::vector<double> log_weights;
  double beta;

  /// a_i = 1 for every site.
  static PolymerState uniform(std::size_t n_columns, double beta);
};

/// Applies a_i <- u (a_{i-1} + a_i + a_{i+1}) at each event, in log space.
PolymerState polymer_evolve(PolymerState state, const ColumnSequence& events,
                            Boundary bc = Boundary::free);

/// Spatial variance (1/N) sum (h_i - mean)^2 of a single profile.
double spatial_variance(const HeightProfile& profile);

} // namespace bdheap
