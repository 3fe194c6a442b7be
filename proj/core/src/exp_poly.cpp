#include "bdheap/exp_poly.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>

#include "bdheap/errors.hpp"

namespace bdheap {
namespace {

mpq_class parse_rational(std::string_view tok) {
  std::string s(tok);
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  while (!s.empty() && s.back() == ' ') s.pop_back();
  if (s.empty()) throw DomainError("parse_phi: empty number");
  if (s.front() == '+') s.erase(s.begin());
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw DomainError("parse_phi: bad number '" + s + "'");
  if (sgn(q.get_den()) == 0) throw DomainError("parse_phi: zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

} // namespace

void ExpPoly::add_term(const mpq_class& rate, const RationalPoly& p) {
  if (p.is_zero()) return;
  auto it = terms_.find(rate);
  if (it == terms_.end()) {
    terms_.emplace(rate, p);
    return;
  }
  it->second += p;
  if (it->second.is_zero()) terms_.erase(it);
}

ExpPoly ExpPoly::constant(const mpq_class& c) {
  ExpPoly e;
  e.add_term(mpq_class(0), RationalPoly(c));
  return e;
}

ExpPoly ExpPoly::exponential(const mpq_class& coeff, const mpq_class& rate) {
  ExpPoly e;
  e.add_term(rate, RationalPoly(coeff));
  return e;
}

ExpPoly ExpPoly::polynomial(const RationalPoly& p) {
  ExpPoly e;
  e.add_term(mpq_class(0), p);
  return e;
}

ExpPoly ExpPoly::derivative() const {
  // d/ds (P e^{a s}) = (P' + a P) e^{a s}
  ExpPoly out;
  for (const auto& [rate, p] : terms_) out.add_term(rate, p.derivative() + RationalPoly(rate) * p);
  return out;
}

double ExpPoly::eval(double s) const {
  double acc = 0.0;
  for (const auto& [rate, p] : terms_) {
    double ps = 0.0;
    const auto& c = p.coeffs();
    for (std::size_t k = c.size(); k-- > 0;) ps = ps * s + c[k].get_d();
    acc += ps * std::exp(rate.get_d() * s);
  }
  return acc;
}

ExpPoly operator+(const ExpPoly& x, const ExpPoly& y) {
  ExpPoly out = x;
  for (const auto& [rate, p] : y.terms_) out.add_term(rate, p);
  return out;
}

ExpPoly operator-(const ExpPoly& x, const ExpPoly& y) {
  ExpPoly out = x;
  for (const auto& [rate, p] : y.terms_) out.add_term(rate, -p);
  return out;
}

ExpPoly operator*(const ExpPoly& x, const ExpPoly& y) {
  ExpPoly out;
  for (const auto& [ra, pa] : x.terms_) {
    for (const auto& [rb, pb] : y.terms_) out.add_term(ra + rb, pa * pb);
  }
  return out;
}

std::string ExpPoly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [rate, p] : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + p.str() + ")";
    if (sgn(rate) != 0) out += "e^{" + to_string(rate) + "s}";
  }
  return out;
}

ExpPoly parse_phi(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw DomainError("parse_phi: expected 'exp:' or 'poly:' prefix");
  }
  const std::string_view kind = text.substr(0, colon);
  const std::string_view body = text.substr(colon + 1);
  ExpPoly out;
  if (kind == "exp") {
    for (auto item : split(body, ',')) {
      const auto at = item.find('@');
      if (at == std::string_view::npos) throw DomainError("parse_phi: exp term needs 'c@a'");
      out = out + ExpPoly::exponential(parse_rational(item.substr(0, at)),
                                       parse_rational(item.substr(at + 1)));
    }
    return out;
  }
  if (kind == "poly") {
    std::vector<mpq_class> c;
    for (auto item : split(body, ',')) c.push_back(parse_rational(item));
    return ExpPoly::polynomial(RationalPoly(std::move(c)));
  }
  throw DomainError("parse_phi: unsupported function class '" + std::string(kind) +
                    "' (use exp or poly)");
}

ExpPoly determinant(const std::vector<std::vector<ExpPoly>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return ExpPoly::constant(1);
  if (n > 20) throw DomainError("determinant: at most 20 columns");
  for (const auto& row : m) {
    if (row.size() != n) throw DomainError("determinant: matrix is not square");
  }
  // minor(mask) = det of rows n-|mask|..n-1 restricted to the columns in mask.
  std::unordered_map<std::uint32_t, ExpPoly> memo;
  const std::function<ExpPoly(std::uint32_t)> minor = [&](std::uint32_t mask) -> ExpPoly {
    if (mask == 0) return ExpPoly::constant(1);
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    const auto k = static_cast<std::size_t>(__builtin_popcount(mask));
    const std::size_t row = n - k;
    ExpPoly acc;
    int sign = 1;
    for (std::size_t c = 0; c < n; ++c) {
      if (!(mask & (1u << c))) continue;
      if (!m[row][c].is_zero()) {
        const ExpPoly term = m[row][c] * minor(mask & ~(1u << c));
        acc = sign > 0 ? acc + term : acc - term;
      }
      sign = -sign;
    }
    memo.emplace(mask, acc);
    return acc;
  };
  return minor((1u << n) - 1u);
}

std::vector<ExpPoly> tau_from_phi(const ExpPoly& phi, int j_max) {
  if (j_max < 0) throw DomainError("tau_from_phi: j_max must be non-negative");
  if (j_max > 20) throw DomainError("tau_from_phi: j_max above 20 is not supported");
  std::vector<ExpPoly> derivs{phi};
  for (int k = 1; k <= 2 * j_max - 2; ++k) derivs.push_back(derivs.back().derivative());
  std::vector<ExpPoly> taus{ExpPoly::constant(1)};
  for (int j = 1; j <= j_max; ++j) {
    std::vector<std::vector<ExpPoly>> h(static_cast<std::size_t>(j),
                                        std::vector<ExpPoly>(static_cast<std::size_t>(j)));
    for (int r = 0; r < j; ++r) {
      for (int c = 0; c < j; ++c) {
        h[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
            derivs[static_cast<std::size_t>(r + c)];
      }
    }
    taus.push_back(determinant(h));
  }
  return taus;
}

ExpPoly bilinear_residual(const std::vector<ExpPoly>& taus, int j) {
  if (j < 0 || static_cast<std::size_t>(j) + 1 >= taus.size()) {
    throw DomainError("bilinear_residual: need tau_{j+1}");
  }
  const auto& t = taus[static_cast<std::size_t>(j)];
  const ExpPoly d1 = t.derivative();
  const ExpPoly d2 = d1.derivative();
  const ExpPoly prev = j == 0 ? ExpPoly() : taus[static_cast<std::size_t>(j - 1)];
  return d2 * t - d1 * d1 - taus[static_cast<std::size_t>(j + 1)] * prev;
}

} // namespace bdheap
