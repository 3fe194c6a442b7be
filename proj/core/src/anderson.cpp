#include "bdheap/anderson.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <gmpxx.h>

#include "bdheap/errors.hpp"

namespace bdheap {
namespace {

constexpr mp_bitcnt_t kBits = 256;

using Vec = std::vector<mpf_class>;

mpf_class make(double x) { return mpf_class(x, kBits); }

// Solves (H - sigma) y = x for the open chain with unit hopping (Thomas algorithm).
Vec shifted_solve(const std::vector<double>& u, const mpf_class& sigma, const Vec& x) {
  const std::size_t n = u.size();
  Vec c(n, make(0.0)), d(n, make(0.0));
  mpf_class pivot = make(u[0]) - sigma;
  if (pivot == 0) pivot = make(1e-60);
  c[0] = make(1.0) / pivot;
  d[0] = x[0] / pivot;
  for (std::size_t j = 1; j < n; ++j) {
    pivot = make(u[j]) - sigma - c[j - 1];
    if (pivot == 0) pivot = make(1e-60);
    c[j] = make(1.0) / pivot;
    d[j] = (x[j] - d[j - 1]) / pivot;
  }
  Vec y(n, make(0.0));
  y[n - 1] = d[n - 1];
  for (std::size_t j = n - 1; j-- > 0;) y[j] = d[j] - c[j] * y[j + 1];
  return y;
}

void normalise(Vec& v) {
  mpf_class s = make(0.0);
  for (const auto& x : v) s += x * x;
  s = sqrt(s);
  for (auto& x : v) x /= s;
}

mpf_class rayleigh(const std::vector<double>& u, const Vec& v) {
  const std::size_t n = u.size();
  mpf_class r = make(0.0);
  for (std::size_t j = 0; j < n; ++j) {
    mpf_class hv = make(u[j]) * v[j];
    if (j > 0) hv += v[j - 1];
    if (j + 1 < n) hv += v[j + 1];
    r += v[j] * hv;
  }
  return r;
}

mpf_class polish(const std::vector<double>& u, double e) {
  mpf_class sigma = make(e);
  Vec v(u.size(), make(1.0));
  // One inverse iteration at the double eigenvalue selects the eigenvector,
  // then Rayleigh quotient steps converge cubically.
  v = shifted_solve(u, sigma, v);
  normalise(v);
  for (int it = 0; it < 3; ++it) {
    sigma = rayleigh(u, v);
    v = shifted_solve(u, sigma, v);
    normalise(v);
  }
  return rayleigh(u, v);
}

template <class T>
double boundary_residual(const std::vector<double>& u, const T& e, const T& zero, const T& one) {
  T prev = zero;
  T cur = one;
  T norm2 = zero;
  for (double uj : u) {
    norm2 += cur * cur;
    T next = (e - uj) * cur - prev;
    prev = cur;
    cur = next;
  }
  using std::abs;
  using std::sqrt;
  T r = abs(cur) / sqrt(norm2);
  if constexpr (std::is_same_v<T, double>) {
    return r;
  } else {
    return r.get_d();
  }
}

} // namespace

AndersonReport anderson_duality_check(const std::vector<double>& u) {
  const std::size_t n = u.size();
  if (n == 0) throw DomainError("anderson_duality_check: empty potential");
  for (double x : u)
    if (!std::isfinite(x)) throw DomainError("anderson_duality_check: non-finite potential");

  Eigen::VectorXd diag(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) diag(static_cast<Eigen::Index>(k)) = u[k];
  Eigen::VectorXd sub = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n - 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("anderson_duality_check: eigensolver did not converge");
  }

  AndersonReport rep;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double e = es.eigenvalues()(k);
    const double rd = boundary_residual<double>(u, e, 0.0, 1.0);
    const double r = boundary_residual<mpf_class>(u, polish(u, e), make(0.0), make(1.0));
    rep.eigenvalues.push_back(e);
    rep.residuals.push_back(r);
    rep.max_residual = std::max(rep.max_residual, r);
    rep.max_residual_double = std::max(rep.max_residual_double, rd);
  }
  return rep;
}

std::vector<double> random_potential(std::size_t n, double w, RngStream& rng) {
  if (!(w >= 0.0)) throw DomainError("random_potential: disorder strength must be non-negative");
  std::vector<double> u(n);
  for (auto& x : u) x = rng.uniform(-w / 2.0, w / 2.0);
  return u;
}

} // namespace bdheap
