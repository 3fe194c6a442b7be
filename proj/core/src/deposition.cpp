#include "bdheap/deposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bdheap/errors.hpp"

namespace bdheap {

__extension__ typedef __int128 i128;
namespace {

void check_column(Column column, std::size_t n) {
  if (column < 1 || column > n) {
    throw DomainError("column " + std::to_string(column) + " outside [1, " + std::to_string(n) +
                      "]");
  }
}

// Neighbour slots of a 0-based column; a missing neighbour under free
// boundaries is reported as npos.
struct Neighbours {
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  std::size_t left;
  std::size_t right;
};

Neighbours neighbours(std::size_t idx, std::size_t n, Boundary bc) {
  Neighbours nb{Neighbours::npos, Neighbours::npos};
  if (idx > 0) {
    nb.left = idx - 1;
  } else if (bc == Boundary::periodic && n > 1) {
    nb.left = n - 1;
  }
  if (idx + 1 < n) {
    nb.right = idx + 1;
  } else if (bc == Boundary::periodic && n > 1) {
    nb.right = 0;
  }
  return nb;
}

double log_sum_exp_neighbourhood(std::span<const double> x, std::size_t idx, Boundary bc,
                                 double scale) {
  const Neighbours nb = neighbours(idx, x.size(), bc);
  double m = scale * x[idx];
  if (nb.left != Neighbours::npos) m = std::max(m, scale * x[nb.left]);
  if (nb.right != Neighbours::npos) m = std::max(m, scale * x[nb.right]);
  double s = std::exp(scale * x[idx] - m);
  if (nb.left != Neighbours::npos) s += std::exp(scale * x[nb.left] - m);
  if (nb.right != Neighbours::npos) s += std::exp(scale * x[nb.right] - m);
  return m + std::log(s);
}

} // namespace

template <class T>
T BasicHeightProfile<T>::max() const {
  if (heights.empty()) return T{};
  return *std::max_element(heights.begin(), heights.end());
}

template struct BasicHeightProfile<std::int64_t>;
template struct BasicHeightProfile<double>;

void validate_events(const ColumnSequence& seq, std::size_t n_columns) {
  for (Column c : seq.events) {
    check_column(c, n_columns);
  }
}

void deposit_hard_inplace(std::span<std::int64_t> h, Column column, Boundary bc) {
  check_column(column, h.size());
  const std::size_t idx = column - 1;
  const Neighbours nb = neighbours(idx, h.size(), bc);
  std::int64_t top = h[idx];
  if (nb.left != Neighbours::npos) top = std::max(top, h[nb.left]);
  if (nb.right != Neighbours::npos) top = std::max(top, h[nb.right]);
  h[idx] = top + 1;
}

HeightProfile deposit_hard(HeightProfile profile, Column column, Boundary bc) {
  deposit_hard_inplace(profile.heights, column, bc);
  return profile;
}

HeightProfile replay_hard(std::size_t n_columns, const ColumnSequence& seq, Boundary bc) {
  HeightProfile p(n_columns);
  for (Column c : seq.events) {
    deposit_hard_inplace(p.heights, c, bc);
  }
  return p;
}

SimulationResult simulate(std::size_t n_columns, std::size_t n_events, RngStream& rng,
                          Boundary bc) {
  if (n_columns == 0) {
    throw DomainError("simulate: need at least one column");
  }
  SimulationResult out{HeightProfile(n_columns), {}};
  out.events.events.reserve(n_events);
  for (std::size_t t = 0; t < n_events; ++t) {
    const Column c = 1 + rng.uniform_index(n_columns);
    out.events.events.push_back(c);
    deposit_hard_inplace(out.profile.heights, c, bc);
  }
  return out;
}

double spatial_variance(const HeightProfile& profile) {
  const auto n = profile.heights.size();
  if (n == 0) return 0.0;
  // Integer sums keep this exact for any realistic height.
  i128 s1 = 0;
  i128 s2 = 0;
  for (auto h : profile.heights) {
    s1 += h;
    s2 += static_cast<i128>(h) * h;
  }
  const i128 num = static_cast<i128>(n) * s2 - s1 * s1;
  return static_cast<double>(num) / (static_cast<double>(n) * static_cast<double>(n));
}

SimulationResult simulate_recorded(std::size_t n_columns, std::size_t n_events, RngStream& rng,
                                   Boundary bc, std::size_t stride,
                                   std::vector<TrajectoryRow>& rows) {
  if (n_columns == 0) {
    throw DomainError("simulate: need at least one column");
  }
  if (stride == 0) {
    throw DomainError("simulate_recorded: stride must be positive");
  }
  SimulationResult out{HeightProfile(n_columns), {}};
  out.events.events.reserve(n_events);
  std::int64_t hmax = 0;
  for (std::size_t t = 1; t <= n_events; ++t) {
    const Column c = 1 + rng.uniform_index(n_columns);
    out.events.events.push_back(c);
    deposit_hard_inplace(out.profile.heights, c, bc);
    hmax = std::max(hmax, out.profile.heights[c - 1]);
    if (t % stride == 0 || t == n_events) {
      rows.push_back({t, c, hmax, spatial_variance(out.profile)});
    }
  }
  return out;
}

SoftProfile deposit_soft(SoftProfile profile, Column column, double beta, Boundary bc) {
  if (!(beta > 0.0)) {
    throw DomainError("deposit_soft: beta must be positive");
  }
  check_column(column, profile.n_columns());
  const std::size_t idx = column - 1;
  const double lse = log_sum_exp_neighbourhood(profile.heights, idx, bc, beta);
  profile.heights[idx] = lse / beta + 1.0;
  return profile;
}

SoftProfile replay_soft(std::size_t n_columns, const ColumnSequence& seq, double beta,
                        Boundary bc) {
  SoftProfile p(n_columns);
  for (Column c : seq.events) {
    p = deposit_soft(std::move(p), c, beta, bc);
  }
  return p;
}

PolymerState PolymerState::uniform(std::size_t n_columns, double beta) {
  return PolymerState{std::vector<double>(n_columns, 0.0), beta};
}

PolymerState polymer_evolve(PolymerState state, const ColumnSequence& events, Boundary bc) {
  if (!(state.beta > 0.0)) {
    throw DomainError("polymer_evolve: beta = ln u must be positive");
  }
  for (double w : state.log_weights) {
    if (!std::isfinite(w)) {
      throw DomainError("polymer_evolve: initial log-weights must be finite");
    }
  }
  validate_events(events, state.log_weights.size());
  for (Column c : events.events) {
    const std::size_t idx = c - 1;
    state.log_weights[idx] =
        state.beta + log_sum_exp_neighbourhood(state.log_weights, idx, bc, 1.0);
  }
  return state;
}

} // namespace bdheap
