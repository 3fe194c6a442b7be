#include "bdheap/rational.hpp"

namespace bdheap {

std::string to_string(const mpq_class& x) {
  mpq_class c = x;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string GaussianRational::str() const {
  if (sgn(im) == 0) return to_string(re);
  const std::string i_part = (im == 1 ? std::string() : im == -1 ? std::string("-") : to_string(im)) + "i";
  if (sgn(re) == 0) return i_part;
  return to_string(re) + (sgn(im) > 0 ? "+" : "") + i_part;
}

bool has_integer_coefficients(const RationalPoly& p) {
  for (const auto& c : p.coeffs()) {
    mpq_class t = c;
    t.canonicalize();
    if (t.get_den() != 1) return false;
  }
  return true;
}

GaussianPoly to_gaussian(const RationalPoly& p) {
  std::vector<GaussianRational> c;
  c.reserve(p.coeffs().size());
  for (const auto& x : p.coeffs()) c.emplace_back(x, mpq_class(0));
  return GaussianPoly(std::move(c));
}

} // namespace bdheap
