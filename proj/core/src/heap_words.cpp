#include "bdheap/heap_words.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <queue>
#include <utility>

#include <json.hpp>

#include "bdheap/errors.hpp"

namespace bdheap {
namespace {

// Above this length normal_form goes through word_to_heap / heap_to_word,
// which is O(T log N) instead of O(T^2).
constexpr std::size_t kBubbleLimit = 256;

void require_positive(const Word& w, const char* who) {
  validate_word(w);
  if (!w.is_positive()) {
    throw DomainError(std::string(who) + ": semigroup operation on a word with inverse letters");
  }
}

} // namespace

bool Word::is_positive() const {
  return std::all_of(letters.begin(), letters.end(), [](const Letter& l) { return l.sign == 1; });
}

Word Word::from_columns(const ColumnSequence& seq, int n_generators) {
  Word w;
  w.n_generators = n_generators;
  w.letters.reserve(seq.size());
  for (Column c : seq.events) {
    w.letters.push_back({static_cast<int>(c), 1});
  }
  validate_word(w);
  return w;
}

ColumnSequence Word::to_columns() const {
  if (!is_positive()) {
    throw DomainError("to_columns: word has inverse letters");
  }
  ColumnSequence seq;
  seq.events.reserve(letters.size());
  for (const auto& l : letters) {
    seq.events.push_back(static_cast<Column>(l.index));
  }
  return seq;
}

void validate_word(const Word& w) {
  if (w.n_generators < 1) {
    throw DomainError("word: n_generators must be positive");
  }
  for (const auto& l : w.letters) {
    if (l.index < 1 || l.index > w.n_generators) {
      throw DomainError("word: generator index " + std::to_string(l.index) + " outside [1, " +
                        std::to_string(w.n_generators) + "]");
    }
    if (l.sign != 1 && l.sign != -1) {
      throw DomainError("word: letter sign must be +1 or -1");
    }
  }
}

std::string format_word(const Word& w) {
  std::string out;
  for (std::size_t k = 0; k < w.letters.size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(w.letters[k].sign * w.letters[k].index);
  }
  return out;
}

Word parse_word(std::string_view text, int n_generators) {
  Word w;
  w.n_generators = n_generators;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' ||
                                 text[pos] == '\r')) {
      ++pos;
    }
    if (pos >= text.size()) break;
    int value = 0;
    const char* first = text.data() + pos;
    const char* last = text.data() + text.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || value == 0) {
      throw DomainError("parse_word: bad token at offset " + std::to_string(pos));
    }
    w.letters.push_back({value > 0 ? value : -value, value > 0 ? 1 : -1});
    pos = static_cast<std::size_t>(ptr - text.data());
  }
  validate_word(w);
  return w;
}

HeightProfile Heap::profile() const {
  HeightProfile p(static_cast<std::size_t>(n_columns));
  for (const auto& c : cells) {
    auto& h = p.heights[static_cast<std::size_t>(c.column - 1)];
    h = std::max(h, c.level);
  }
  return p;
}

bool same_shape(const Heap& a, const Heap& b) {
  if (a.n_columns != b.n_columns || a.cells.size() != b.cells.size()) return false;
  auto key = [](const Heap& h) {
    std::vector<std::pair<int, std::int64_t>> k;
    k.reserve(h.cells.size());
    for (const auto& c : h.cells) k.emplace_back(c.column, c.level);
    std::sort(k.begin(), k.end());
    return k;
  };
  return key(a) == key(b);
}

void validate_heap(const Heap& heap) {
  if (heap.n_columns < 1) {
    throw ValidationError("heap: n_columns must be positive");
  }
  std::vector<HeapCell> cells = heap.cells;
  std::sort(cells.begin(), cells.end(),
            [](const HeapCell& x, const HeapCell& y) { return x.timestamp < y.timestamp; });
  std::vector<std::int64_t> top(static_cast<std::size_t>(heap.n_columns), 0);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto& c = cells[k];
    if (c.timestamp != k + 1) {
      throw ValidationError("heap: timestamps must be exactly 1..T (missing or repeated " +
                            std::to_string(k + 1) + ")");
    }
    if (c.column < 1 || c.column > heap.n_columns) {
      throw ValidationError("heap: cell at t=" + std::to_string(c.timestamp) +
                            " has column out of range");
    }
    const auto idx = static_cast<std::size_t>(c.column - 1);
    std::int64_t support = top[idx];
    if (idx > 0) support = std::max(support, top[idx - 1]);
    if (idx + 1 < top.size()) support = std::max(support, top[idx + 1]);
    if (c.level != support + 1) {
      throw ValidationError("heap: cell (" + std::to_string(c.column) + ", " +
                            std::to_string(c.level) + ", " + std::to_string(c.timestamp) +
                            ") violates the landing rule (expected level " +
                            std::to_string(support + 1) + ")");
    }
    top[idx] = c.level;
  }
}

Word normal_form_bubble(const Word& w) {
  require_positive(w, "normal_form");
  Word out = w;
  auto& s = out.letters;
  bool swapped = true;
  while (swapped) {
    swapped = false;
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
      if (s[k].index > s[k + 1].index && commutes(s[k], s[k + 1])) {
        std::swap(s[k], s[k + 1]);
        swapped = true;
      }
    }
  }
  return out;
}

Word normal_form(const Word& w) {
  if (w.size() <= kBubbleLimit) {
    return normal_form_bubble(w);
  }
  require_positive(w, "normal_form");
  return heap_to_word(word_to_heap(w));
}

Heap word_to_heap(const Word& w) {
  require_positive(w, "word_to_heap");
  Heap heap;
  heap.n_columns = w.n_generators;
  heap.cells.reserve(w.size());
  HeightProfile p(static_cast<std::size_t>(w.n_generators));
  std::size_t t = 0;
  for (const auto& l : w.letters) {
    deposit_hard_inplace(p.heights, static_cast<Column>(l.index), Boundary::free);
    heap.cells.push_back({l.index, p.heights[static_cast<std::size_t>(l.index - 1)], ++t});
  }
  return heap;
}

Word heap_to_word(const Heap& heap) {
  validate_heap(heap);
  const auto n = static_cast<std::size_t>(heap.n_columns);
  // Per-column stacks of levels, lowest first.
  std::vector<std::vector<std::int64_t>> stacks(n);
  for (const auto& c : heap.cells) {
    stacks[static_cast<std::size_t>(c.column - 1)].push_back(c.level);
  }
  for (auto& s : stacks) std::sort(s.begin(), s.end());
  std::vector<std::size_t> cursor(n, 0);

  auto bottom = [&](std::size_t col) -> std::int64_t {
    return cursor[col] < stacks[col].size() ? stacks[col][cursor[col]]
                                            : std::numeric_limits<std::int64_t>::max();
  };
  // A column is free when its bottom cell lies below the bottom cells of both
  // neighbours (dependent cells never share a level).
  auto is_free = [&](std::size_t col) {
    if (cursor[col] >= stacks[col].size()) return false;
    const auto lv = bottom(col);
    if (col > 0 && bottom(col - 1) < lv) return false;
    if (col + 1 < n && bottom(col + 1) < lv) return false;
    return true;
  };

  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  std::vector<char> queued(n, 0);
  auto offer = [&](std::size_t col) {
    if (!queued[col] && is_free(col)) {
      ready.push(col);
      queued[col] = 1;
    }
  };
  for (std::size_t c = 0; c < n; ++c) offer(c);

  Word out;
  out.n_generators = heap.n_columns;
  out.letters.reserve(heap.cells.size());
  while (!ready.empty()) {
    const std::size_t col = ready.top();
    ready.pop();
    queued[col] = 0;
    if (!is_free(col)) continue;
    out.letters.push_back({static_cast<int>(col + 1), 1});
    ++cursor[col];
    offer(col);
    if (col > 0) offer(col - 1);
    if (col + 1 < n) offer(col + 1);
  }
  if (out.letters.size() != heap.cells.size()) {
    throw ValidationError("heap_to_word: heap could not be fully contracted");
  }
  return out;
}

Word reduce_colored(const Word& w) {
  validate_word(w);
  std::vector<Letter> s = w.letters;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 1; k < s.size() && !changed; ++k) {
      // Walk left from s[k] over letters it commutes with; the first blocker decides.
      for (std::size_t j = k; j-- > 0;) {
        if (commutes(s[j], s[k])) continue;
        if (s[j].index == s[k].index && s[j].sign == -s[k].sign) {
          s.erase(s.begin() + static_cast<std::ptrdiff_t>(k));
          s.erase(s.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
        }
        break;
      }
    }
  }
  return Word{std::move(s), w.n_generators};
}

std::string heap_to_json(const Heap& heap) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& c : heap.cells) {
    j.push_back({c.column, c.level, c.timestamp});
  }
  return j.dump();
}

} // namespace bdheap
