#pragma once

// Exact univariate polynomials over Q and over Q(i).

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "bdheap/errors.hpp"

namespace bdheap {

/// a + b i with rational a, b.
struct GaussianRational {
  mpq_class re{0};
  mpq_class im{0};

  GaussianRational() = default;
  GaussianRational(long v) : re(v) {} // NOLINT: implicit from integers, like mpq_class
  GaussianRational(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }

  friend GaussianRational operator+(const GaussianRational& x, const GaussianRational& y) {
    return {x.re + y.re, x.im + y.im};
  }
  friend GaussianRational operator-(const GaussianRational& x, const GaussianRational& y) {
    return {x.re - y.re, x.im - y.im};
  }
  friend GaussianRational operator-(const GaussianRational& x) { return {-x.re, -x.im}; }
  friend GaussianRational operator*(const GaussianRational& x, const GaussianRational& y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  }
  friend GaussianRational operator/(const GaussianRational& x, const GaussianRational& y) {
    const mpq_class n = y.re * y.re + y.im * y.im;
    if (sgn(n) == 0) throw DomainError("GaussianRational: division by zero");
    return {(x.re * y.re + x.im * y.im) / n, (x.im * y.re - x.re * y.im) / n};
  }
  GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
  GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
  GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }
  friend bool operator==(const GaussianRational& x, const GaussianRational& y) {
    return x.re == y.re && x.im == y.im;
  }

  std::string str() const;
};

inline bool is_zero(const mpq_class& x) { return sgn(x) == 0; }
inline bool is_zero(const GaussianRational& x) { return x.is_zero(); }

std::string to_string(const mpq_class& x); // "num/den", or "num" when den == 1
inline std::string to_string(const GaussianRational& x) { return x.str(); }

/// Dense polynomial sum_k c[k] z^k, kept trimmed (no trailing zero coefficients;
/// the zero polynomial has no coefficients).
template <class F>
class Poly {
public:
  Poly() = default;
  explicit Poly(std::vector<F> coeffs) : c_(std::move(coeffs)) { trim(); }
  Poly(const F& constant) { // NOLINT: implicit constant promotion
    if (!bdheap::is_zero(constant)) c_.push_back(constant);
  }

  static Poly monomial(const F& coeff, std::size_t power) {
    std::vector<F> c(power + 1, F(0));
    c[power] = coeff;
    return Poly(std::move(c));
  }
  static Poly z() { return monomial(F(1), 1); }

  bool is_zero() const { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const std::vector<F>& coeffs() const { return c_; }
  F coeff(std::size_t k) const { return k < c_.size() ? c_[k] : F(0); }
  const F& leading() const {
    if (c_.empty()) throw DomainError("Poly: zero polynomial has no leading coefficient");
    return c_.back();
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<F> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * F(static_cast<long>(k));
    return Poly(std::move(d));
  }

  F eval(const F& x) const {
    F acc(0);
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
    return acc;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<F> r(std::max(a.c_.size(), b.c_.size()), F(0));
    for (std::size_t k = 0; k < a.c_.size(); ++k) r[k] = r[k] + a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) r[k] = r[k] + b.c_[k];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a) {
    std::vector<F> r(a.c_.size());
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = F(0) - a.c_[k];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<F> r(a.c_.size() + b.c_.size() - 1, F(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
    }
    return Poly(std::move(r));
  }
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  /// Quotient and remainder of Euclidean division.
  friend std::pair<Poly, Poly> divmod(const Poly& num, const Poly& den) {
    if (den.is_zero()) throw DomainError("Poly: division by the zero polynomial");
    std::vector<F> r = num.c_;
    if (num.degree() < den.degree()) return {Poly(), num};
    const std::size_t dq = static_cast<std::size_t>(num.degree() - den.degree());
    std::vector<F> q(dq + 1, F(0));
    const F lead = den.leading();
    for (std::size_t k = dq + 1; k-- > 0;) {
      const F f = r[k + den.c_.size() - 1] / lead;
      q[k] = f;
      if (bdheap::is_zero(f)) continue;
      for (std::size_t j = 0; j < den.c_.size(); ++j) r[k + j] = r[k + j] - f * den.c_[j];
    }
    return {Poly(std::move(q)), Poly(std::move(r))};
  }

  /// Exact quotient; throws InvariantViolation when the remainder is nonzero.
  friend Poly exact_div(const Poly& num, const Poly& den) {
    auto [q, r] = divmod(num, den);
    if (!r.is_zero()) {
      throw InvariantViolation("Poly: inexact division, remainder " + r.str());
    }
    return q;
  }

  /// Human-readable form, highest power first, e.g. "z^3 + 4".
  std::string str() const {
    if (c_.empty()) return "0";
    std::string out;
    for (std::size_t k = c_.size(); k-- > 0;) {
      if (bdheap::is_zero(c_[k])) continue;
      if (!out.empty()) out += " + ";
      const std::string cs = to_string(c_[k]);
      if (k == 0) {
        out += cs;
      } else {
        if (cs != "1") out += (cs.find_first_of(" +") != std::string::npos ? "(" + cs + ")" : cs) + "*";
        out += k == 1 ? "z" : "z^" + std::to_string(k);
      }
    }
    return out;
  }

private:
  void trim() {
    while (!c_.empty() && bdheap::is_zero(c_.back())) c_.pop_back();
  }

  std::vector<F> c_;
};

using RationalPoly = Poly<mpq_class>;
using GaussianPoly = Poly<GaussianRational>;

/// Every coefficient has denominator 1.
bool has_integer_coefficients(const RationalPoly& p);

GaussianPoly to_gaussian(const RationalPoly& p);

} // namespace bdheap
