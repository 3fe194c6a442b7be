#pragma once

// Words in the locally free group F_N and its positive semigroup: generators
// g_1..g_N with g_k g_m = g_m g_k whenever |k - m| >= 2 and no other relation.
// A positive word is the history of a heap; its normal order form (smaller
// indices pushed left wherever commutation allows) labels the heap uniquely.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bdheap/deposition.hpp"

namespace bdheap {

struct Letter {
  int index; // 1-based generator number
  int sign;  // +1 for g_i, -1 for g_i^{-1}

  friend bool operator==(const Letter&, const Letter&) = default;
};

inline bool commutes(const Letter& a, const Letter& b) {
  const int d = a.index - b.index;
  return d >= 2 || d <= -2;
}

struct Word {
  std::vector<Letter> letters;
  int n_generators = 0;

  std::size_t size() const noexcept { return letters.size(); }
  bool is_positive() const;

  /// Positive word from a column sequence (one g_i per drop).
  static Word from_columns(const ColumnSequence& seq, int n_generators);
  ColumnSequence to_columns() const;

  friend bool operator==(const Word&, const Word&) = default;
};

/// Throws DomainError when an index falls outside [1, n_generators] or a sign is not +-1.
void validate_word(const Word& w);

/// Whitespace-separated signed integers, e.g. "3 6 1 -2".
std::string format_word(const Word& w);
Word parse_word(std::string_view text, int n_generators);

/// One deposited cell of a numbered heap.
struct HeapCell {
  int column;
  std::int64_t level;
  std::size_t timestamp;

  friend bool operator==(const HeapCell&, const HeapCell&) = default;
};

struct Heap {
  int n_columns = 0;
  std::vector<HeapCell> cells; // ordered by timestamp

  std::size_t size() const noexcept { return cells.size(); }
  /// Column heights after all drops.
  HeightProfile profile() const;

  friend bool operator==(const Heap&, const Heap&) = default;
};

/// Same cells as (column, level) pairs, timestamps ignored. Two heaps with the
/// same shape are the same element of F_N^+.
bool same_shape(const Heap& a, const Heap& b);

/// Throws ValidationError unless timestamps are 1..T, columns are in range and
/// each cell sits at one plus the highest earlier cell in columns c-1, c, c+1.
void validate_heap(const Heap& heap);

/// Canonical form by adjacent swaps (a, b) -> (b, a) for commuting a > b,
/// repeated to a fixpoint. Quadratic; long words are routed through the heap.
Word normal_form(const Word& w);

/// Bubble-pass implementation regardless of length (reference path).
Word normal_form_bubble(const Word& w);

/// Drops one cell per letter, in order, under the free-boundary landing rule.
Heap word_to_heap(const Word& w);

/// Normal-order word of a heap: repeatedly removes the lowest-index column
/// whose bottom cell is not covered by an unremoved cell in an adjacent column.
Word heap_to_word(const Heap& heap);

/// Cancels g_i^{+-1} against a later g_i^{-+1} when only commuting letters lie
/// between them, until no such pair is left. The result is geodesic.
Word reduce_colored(const Word& w);

/// JSON array [[column, level, timestamp], ...].
std::string heap_to_json(const Heap& heap);

} // namespace bdheap
