#pragma once

// Exact checks of the sl_2 and sl_3 matrix generators built from two
// overlapping copies of sl_2.

#include <string>
#include <vector>

#include <gmpxx.h>

namespace bdheap {

/// Small dense square matrix with rational entries.
class LieElement {
public:
  explicit LieElement(std::size_t n = 0);
  /// Matrix with a single 1 at (row, col), 0-based.
  static LieElement unit(std::size_t n, std::size_t row, std::size_t col);
  static LieElement identity(std::size_t n);

  std::size_t dim() const noexcept { return n_; }
  const mpq_class& operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }
  mpq_class& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }

  friend LieElement operator+(const LieElement& x, const LieElement& y);
  friend LieElement operator-(const LieElement& x, const LieElement& y);
  friend LieElement operator*(const LieElement& x, const LieElement& y);
  friend LieElement operator*(const mpq_class& s, const LieElement& x);
  friend bool operator==(const LieElement& x, const LieElement& y) {
    return x.n_ == y.n_ && x.a_ == y.a_;
  }

  std::string str() const;

private:
  std::size_t n_;
  std::vector<mpq_class> a_;
};

LieElement commutator(const LieElement& x, const LieElement& y);

struct LieCheck {
  std::string name;
  bool passed;
};

struct LieReport {
  std::vector<LieCheck> checks;
  LieElement casimir{3};   // X1X2 + X2X1 + Y1Y2 + Y2Y1 + X4Y4 + Y4X4 + 2/3 (X3^2 + Y3^2 + X3Y3)
  mpq_class casimir_scalar; // value c if casimir == c I, else 0
  bool casimir_is_scalar = false;
  bool all_passed() const;
};

/// 2x2 sl_2 relations, the 3x3 relations of both shifted copies and their
/// cross relations, X4 = [X1, Y1], Y4 = [Y2, X2] and the Casimir combination.
LieReport lie_checks();

} // namespace bdheap
