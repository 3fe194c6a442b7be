#include "bdheap/lie.hpp"

#include "bdheap/errors.hpp"
#include "bdheap/rational.hpp"

namespace bdheap {

LieElement::LieElement(std::size_t n) : n_(n), a_(n * n, mpq_class(0)) {}

LieElement LieElement::unit(std::size_t n, std::size_t row, std::size_t col) {
  LieElement m(n);
  m(row, col) = 1;
  return m;
}

LieElement LieElement::identity(std::size_t n) {
  LieElement m(n);
  for (std::size_t k = 0; k < n; ++k) m(k, k) = 1;
  return m;
}

namespace {
void same_dim(const LieElement& x, const LieElement& y) {
  if (x.dim() != y.dim()) throw DomainError("LieElement: dimension mismatch");
}
} // namespace

LieElement operator+(const LieElement& x, const LieElement& y) {
  same_dim(x, y);
  LieElement r(x.n_);
  for (std::size_t k = 0; k < r.a_.size(); ++k) r.a_[k] = x.a_[k] + y.a_[k];
  return r;
}

LieElement operator-(const LieElement& x, const LieElement& y) {
  same_dim(x, y);
  LieElement r(x.n_);
  for (std::size_t k = 0; k < r.a_.size(); ++k) r.a_[k] = x.a_[k] - y.a_[k];
  return r;
}

LieElement operator*(const LieElement& x, const LieElement& y) {
  same_dim(x, y);
  const std::size_t n = x.n_;
  LieElement r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) r(i, j) += x(i, k) * y(k, j);
  return r;
}

LieElement operator*(const mpq_class& s, const LieElement& x) {
  LieElement r(x.n_);
  for (std::size_t k = 0; k < r.a_.size(); ++k) r.a_[k] = s * x.a_[k];
  return r;
}

std::string LieElement::str() const {
  std::string out = "[";
  for (std::size_t r = 0; r < n_; ++r) {
    out += r ? ", [" : "[";
    for (std::size_t c = 0; c < n_; ++c) {
      if (c) out += ", ";
      out += to_string((*this)(r, c));
    }
    out += "]";
  }
  return out + "]";
}

LieElement commutator(const LieElement& x, const LieElement& y) { return x * y - y * x; }

bool LieReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return casimir_is_scalar;
}

LieReport lie_checks() {
  LieReport rep;
  auto check = [&](std::string name, const LieElement& lhs, const LieElement& rhs) {
    rep.checks.push_back({std::move(name), lhs == rhs});
  };
  const mpq_class two(2);

  // 2x2 representation.
  const LieElement a1 = LieElement::unit(2, 0, 1);
  const LieElement a2 = LieElement::unit(2, 1, 0);
  const LieElement a3 = LieElement::unit(2, 0, 0) - LieElement::unit(2, 1, 1);
  check("sl2: [X1,X2] = X3", commutator(a1, a2), a3);
  check("sl2: [X1,X3] = -2 X1", commutator(a1, a3), mpq_class(-2) * a1);
  check("sl2: [X2,X3] = 2 X2", commutator(a2, a3), two * a2);

  // Two shifted copies inside 3x3.
  const LieElement x1 = LieElement::unit(3, 0, 1);
  const LieElement x2 = LieElement::unit(3, 1, 0);
  const LieElement x3 = LieElement::unit(3, 0, 0) - LieElement::unit(3, 1, 1);
  const LieElement y1 = LieElement::unit(3, 1, 2);
  const LieElement y2 = LieElement::unit(3, 2, 1);
  const LieElement y3 = LieElement::unit(3, 1, 1) - LieElement::unit(3, 2, 2);
  const LieElement x4 = LieElement::unit(3, 0, 2);
  const LieElement y4 = LieElement::unit(3, 2, 0);

  check("sl3: [X1,X2] = X3", commutator(x1, x2), x3);
  check("sl3: [X1,X3] = -2 X1", commutator(x1, x3), mpq_class(-2) * x1);
  check("sl3: [X2,X3] = 2 X2", commutator(x2, x3), two * x2);
  check("sl3: [Y1,Y2] = Y3", commutator(y1, y2), y3);
  check("sl3: [Y1,Y3] = -2 Y1", commutator(y1, y3), mpq_class(-2) * y1);
  check("sl3: [Y2,Y3] = 2 Y2", commutator(y2, y3), two * y2);
  check("sl3: [X1,Y3] = X1", commutator(x1, y3), x1);
  check("sl3: [X2,Y3] = -X2", commutator(x2, y3), mpq_class(-1) * x2);
  check("sl3: [Y1,X3] = Y1", commutator(y1, x3), y1);
  check("sl3: [Y2,X3] = -Y2", commutator(y2, x3), mpq_class(-1) * y2);
  check("sl3: X4 = [X1,Y1]", commutator(x1, y1), x4);
  check("sl3: X4 = X1 Y1", x1 * y1, x4);
  check("sl3: Y4 = [Y2,X2]", commutator(y2, x2), y4);
  check("sl3: Y4 = Y2 X2", y2 * x2, y4);

  rep.casimir = x1 * x2 + x2 * x1 + y1 * y2 + y2 * y1 + x4 * y4 + y4 * x4 +
                mpq_class(2, 3) * (x3 * x3 + y3 * y3 + x3 * y3);
  const mpq_class c = rep.casimir(0, 0);
  rep.casimir_is_scalar = rep.casimir == c * LieElement::identity(3);
  rep.casimir_scalar = rep.casimir_is_scalar ? c : mpq_class(0);
  return rep;
}

} // namespace bdheap
