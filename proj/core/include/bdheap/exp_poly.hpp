#pragma once

// Exact expressions sum_a P_a(s) e^{a s} with rational exponents a and
// rational polynomials P_a. The class is closed under sums, products and
// d/ds, which is all a Hankel determinant of derivatives needs.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bdheap/rational.hpp"

namespace bdheap {

class ExpPoly {
public:
  using Terms = std::map<mpq_class, RationalPoly>;

  ExpPoly() = default;
  static ExpPoly constant(const mpq_class& c);
  static ExpPoly exponential(const mpq_class& coeff, const mpq_class& rate); // coeff e^{rate s}
  static ExpPoly polynomial(const RationalPoly& p);

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  ExpPoly derivative() const;
  double eval(double s) const;

  friend ExpPoly operator+(const ExpPoly& x, const ExpPoly& y);
  friend ExpPoly operator-(const ExpPoly& x, const ExpPoly& y);
  friend ExpPoly operator*(const ExpPoly& x, const ExpPoly& y);
  friend bool operator==(const ExpPoly& x, const ExpPoly& y) { return x.terms_ == y.terms_; }

  /// e.g. "(1)e^{1s} + (1)e^{2s}"; "0" for zero.
  std::string str() const;

private:
  void add_term(const mpq_class& rate, const RationalPoly& p);
  Terms terms_;
};

/// "exp:c@a,c@a,..." for sum c e^{a s}, or "poly:c0,c1,..." for sum c_k s^k.
/// Numbers are integers or fractions "p/q". Anything else is a DomainError.
ExpPoly parse_phi(std::string_view text);

/// Determinant of a square matrix of ExpPoly by cofactor expansion with
/// memoisation over column subsets (at most 20 columns).
ExpPoly determinant(const std::vector<std::vector<ExpPoly>>& m);

/// tau_0 .. tau_{j_max}: tau_0 = 1 and tau_j = det [phi^{(r + c)}], r, c < j.
std::vector<ExpPoly> tau_from_phi(const ExpPoly& phi, int j_max);

/// tau_j'' tau_j - (tau_j')^2 - tau_{j+1} tau_{j-1} with tau_{-1} = 0.
/// Needs 0 <= j < taus.size() - 1.
ExpPoly bilinear_residual(const std::vector<ExpPoly>& taus, int j);

} // namespace bdheap
