#pragma once

#include <cstdint>
#include <random>

namespace bdheap {

/// Reproducible random stream keyed by (master_seed, stream_index).
///
/// The engine is a 64-bit Mersenne twister whose state is expanded from the
/// key by a seed_seq, so distinct stream indices give unrelated sequences.
/// Bounded integers and unit reals are derived by hand (Lemire reduction,
/// 53-bit mantissa) instead of through the std distributions, whose output
/// is implementation-defined; the draw sequence is therefore identical on
/// every standard library.
class RngStream {
public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

  /// Independent child stream; child(k) of the same parent is always the same.
  RngStream child(std::uint64_t k) const;

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  /// Uniform real in [0, 1).
  double uniform01();

  /// Uniform real in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Standard normal via Box-Muller (consumes two draws).
  double normal();

private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
};

} // namespace bdheap
