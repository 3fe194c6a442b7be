#include "bdheap/painleve.hpp"

#include <algorithm>
#include <cstdlib>

namespace bdheap {
namespace {

GaussianRational power(const GaussianRational& base, long e) {
  GaussianRational b = e < 0 ? GaussianRational(1) / base : base;
  unsigned long k = static_cast<unsigned long>(std::labs(e));
  GaussianRational acc(1);
  while (k) {
    if (k & 1u) acc = acc * b;
    b = b * b;
    k >>= 1u;
  }
  return acc;
}

} // namespace

std::vector<RationalPoly> yablonskii(int j_max) {
  if (j_max < 1) throw DomainError("yablonskii: j_max must be at least 1");
  const RationalPoly z = RationalPoly::z();
  std::vector<RationalPoly> q{RationalPoly(mpq_class(1)), z};
  RationalPoly prev(mpq_class(1)); // Q_{j-1}, starting from Q_0 when j = 1
  for (int j = 1; j < j_max; ++j) {
    const RationalPoly& qj = q[static_cast<std::size_t>(j)];
    const RationalPoly d1 = qj.derivative();
    const RationalPoly d2 = d1.derivative();
    const RationalPoly num = z * qj * qj - RationalPoly(mpq_class(4)) * (d2 * qj - d1 * d1);
    q.push_back(exact_div(num, q[static_cast<std::size_t>(j - 1)]));
  }
  return q;
}

RationalPoly painleve2_residual(const std::vector<RationalPoly>& q, int j) {
  if (j < 0 || static_cast<std::size_t>(j) >= q.size()) {
    throw DomainError("painleve2_residual: Q_j not available");
  }
  const RationalPoly qm = j == 0 ? RationalPoly(mpq_class(1)) : q[static_cast<std::size_t>(j - 1)];
  const RationalPoly& qj = q[static_cast<std::size_t>(j)];
  // w = N / D
  const RationalPoly n = qm.derivative() * qj - qj.derivative() * qm;
  const RationalPoly d = qm * qj;
  const RationalPoly n1 = n.derivative();
  const RationalPoly n2 = n1.derivative();
  const RationalPoly d1 = d.derivative();
  const RationalPoly d2 = d1.derivative();
  const RationalPoly z = RationalPoly::z();
  const RationalPoly two(mpq_class(2));
  const RationalPoly alpha{mpq_class(j)};
  return (n2 * d - n * d2) * d - two * d1 * (n1 * d - n * d1) - two * n * n * n - z * n * d * d -
         alpha * d * d * d;
}

RationalPoly painleve2_residual(int j) {
  if (j < 0) throw DomainError("painleve2_residual: j must be non-negative");
  return painleve2_residual(yablonskii(std::max(j, 1)), j);
}

SigmaGaugeReport sigma_gauge_check(int j_max, const SigmaGaugeOptions& opt) {
  if (j_max < 2) throw DomainError("sigma_gauge_check: j_max must be at least 2");
  if (opt.a.is_zero()) throw DomainError("sigma_gauge_check: A must be nonzero");
  const auto q = yablonskii(j_max);
  auto sigma = [&](int j) {
    const RationalPoly qj = j < 0 ? RationalPoly(mpq_class(1)) : q[static_cast<std::size_t>(j)];
    return GaussianPoly(power(opt.a, static_cast<long>(opt.exponent_sign) * j * j)) *
           to_gaussian(qj);
  };
  SigmaGaugeReport rep;
  rep.pq = sigma(-1) * sigma(1);
  rep.pq_is_minus_z_over_4 =
      rep.pq == GaussianPoly::monomial(GaussianRational(mpq_class(-1, 4)), 1);
  rep.passed = true;
  for (int j = 1; j < j_max; ++j) {
    const GaussianPoly s = sigma(j);
    const GaussianPoly s1 = s.derivative();
    const GaussianPoly s2 = s1.derivative();
    GaussianPoly r = s2 * s - s1 * s1 - sigma(j + 1) * sigma(j - 1) + rep.pq * s * s;
    rep.passed = rep.passed && r.is_zero();
    rep.residuals.push_back(std::move(r));
  }
  return rep;
}

} // namespace bdheap
