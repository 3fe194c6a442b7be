#include "bdheap/toda.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace bdheap {
namespace {

// Yoshida composition of three leapfrog steps.
const double kW1 = 1.0 / (2.0 - std::cbrt(2.0));
const double kW0 = -std::cbrt(2.0) / (2.0 - std::cbrt(2.0));

void leapfrog(TodaState& s, double h) {
  const std::size_t n = s.size();
  auto f = toda_rhs(s);
  for (std::size_t j = 0; j < n; ++j) s.p[j] += 0.5 * h * f[j];
  for (std::size_t j = 0; j < n; ++j) s.mu[j] += h * s.p[j];
  f = toda_rhs(s);
  for (std::size_t j = 0; j < n; ++j) s.p[j] += 0.5 * h * f[j];
}

void yoshida_step(TodaState& s, double dt) {
  leapfrog(s, kW1 * dt);
  leapfrog(s, kW0 * dt);
  leapfrog(s, kW1 * dt);
}

bool finite(const TodaState& s) {
  for (std::size_t j = 0; j < s.size(); ++j)
    if (!std::isfinite(s.mu[j]) || !std::isfinite(s.p[j])) return false;
  return true;
}

std::complex<double> char_poly(const Eigen::MatrixXcd& l, std::complex<double> lambda) {
  const Eigen::MatrixXcd m =
      l - lambda * Eigen::MatrixXcd::Identity(l.rows(), l.cols());
  return m.partialPivLu().determinant();
}

} // namespace

void TodaState::validate() const {
  if (mu.empty()) throw DomainError("TodaState: empty chain");
  if (mu.size() != p.size()) throw DomainError("TodaState: mu and p differ in length");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw DomainError("TodaState: kappa must be finite and non-negative");
  }
  for (std::size_t j = 0; j < mu.size(); ++j) {
    if (!std::isfinite(mu[j]) || !std::isfinite(p[j])) {
      throw DomainError("TodaState: non-finite coordinate");
    }
  }
}

std::vector<double> toda_rhs(const TodaState& s) {
  const std::size_t n = s.size();
  std::vector<double> acc(n, 0.0);
  if (n < 2 || s.kappa == 0.0) return acc;
  // Bond j joins j and j+1 with force kappa e^{mu_j - mu_{j+1}} pushing them apart.
  const std::size_t bonds = s.bc == TodaBoundary::periodic ? n : n - 1;
  for (std::size_t b = 0; b < bonds; ++b) {
    const std::size_t j = b;
    const std::size_t k = (b + 1) % n;
    const double f = s.kappa * std::exp(s.mu[j] - s.mu[k]);
    acc[j] -= f;
    acc[k] += f;
  }
  return acc;
}

double hamiltonian(const TodaState& s) {
  const std::size_t n = s.size();
  double h = 0.0;
  for (double x : s.p) h += 0.5 * x * x;
  if (n < 2) return h;
  const std::size_t bonds = s.bc == TodaBoundary::periodic ? n : n - 1;
  for (std::size_t b = 0; b < bonds; ++b) h += s.kappa * std::exp(s.mu[b] - s.mu[(b + 1) % n]);
  return h;
}

double total_momentum(const TodaState& s) {
  double t = 0.0;
  for (double x : s.p) t += x;
  return t;
}

TodaTrajectory toda_integrate(const TodaState& state, double dt, std::size_t steps,
                              std::size_t sample_every) {
  state.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("toda_integrate: dt must be positive");
  TodaTrajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(state);
  TodaState s = state;
  TodaState last = state;
  for (std::size_t k = 1; k <= steps; ++k) {
    yoshida_step(s, dt);
    if (!finite(s)) {
      throw TodaIntegrationError("toda_integrate: state blew up at step " + std::to_string(k),
                                 last, static_cast<double>(k - 1) * dt);
    }
    last = s;
    if ((sample_every > 0 && k % sample_every == 0) || k == steps) {
      traj.times.push_back(static_cast<double>(k) * dt);
      traj.states.push_back(s);
    }
  }
  return traj;
}

TodaState toda_evolve(const TodaState& state, double dt, std::size_t steps) {
  return toda_integrate(state, dt, steps, 0).states.back();
}

double time_reversal_error(const TodaState& state, double dt, std::size_t steps) {
  TodaState s = toda_evolve(state, dt, steps);
  for (auto& x : s.p) x = -x;
  s = toda_evolve(s, dt, steps);
  double err = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    err = std::max(err, std::abs(s.mu[j] - state.mu[j]));
    err = std::max(err, std::abs(-s.p[j] - state.p[j]));
  }
  return err;
}

Eigen::MatrixXcd lax_matrix(const TodaState& s, std::complex<double> w, LaxConvention conv) {
  s.validate();
  if (w == std::complex<double>(0.0, 0.0)) throw DomainError("lax_matrix: w must be nonzero");
  const std::size_t n = s.size();
  const bool periodic = s.bc == TodaBoundary::periodic;
  if (periodic && n < 3) throw DomainError("lax_matrix: periodic chain needs N >= 3");
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(N, N);
  for (Eigen::Index j = 0; j < N; ++j) l(j, j) = -s.p[static_cast<std::size_t>(j)];
  const double rk = std::sqrt(s.kappa);
  for (Eigen::Index j = 0; j + 1 < N; ++j) {
    const double dmu = s.mu[static_cast<std::size_t>(j)] - s.mu[static_cast<std::size_t>(j + 1)];
    const double a = conv == LaxConvention::flow ? rk * std::exp(dmu / 2.0) : std::exp(-dmu / 2.0);
    l(j, j + 1) = a;
    l(j + 1, j) = a;
  }
  if (periodic) {
    const double e = std::exp((s.mu[n - 1] - s.mu[0]) / 2.0);
    if (conv == LaxConvention::flow) {
      l(0, N - 1) = rk * e / w;
      l(N - 1, 0) = rk * e * w;
    } else {
      l(0, N - 1) = e / w;
      l(N - 1, 0) = -w * e;
    }
  }
  return l;
}

std::vector<std::complex<double>> lax_spectrum(const TodaState& s, std::complex<double> w,
                                               LaxConvention conv) {
  const Eigen::MatrixXcd l = lax_matrix(s, w, conv);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(l, false);
  if (es.info() != Eigen::Success) throw NumericalError("lax_spectrum: eigensolver failed");
  std::vector<std::complex<double>> ev(es.eigenvalues().data(),
                                       es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](const auto& x, const auto& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return ev;
}

double spectral_curve_residual(const TodaState& s, std::complex<double> w0, LaxConvention conv) {
  if (s.bc != TodaBoundary::periodic) return 0.0; // no w dependence at all
  const std::complex<double> w1 = 2.0 * w0 + 0.5;
  const std::complex<double> w2 = 3.0 * w0 - 0.25;
  auto x = [](std::complex<double> w) { return w + 1.0 / w; };
  double worst = 0.0;
  for (double lambda : {-1.3, 0.4, 2.1}) {
    const auto f0 = char_poly(lax_matrix(s, w0, conv), lambda);
    const auto finv = char_poly(lax_matrix(s, 1.0 / w0, conv), lambda);
    const auto f1 = char_poly(lax_matrix(s, w1, conv), lambda);
    const auto f2 = char_poly(lax_matrix(s, w2, conv), lambda);
    const double scale = std::max({1.0, std::abs(f0), std::abs(f1), std::abs(f2)});
    worst = std::max(worst, std::abs(f0 - finv) / scale);
    const auto slope1 = (f1 - f0) / (x(w1) - x(w0));
    const auto slope2 = (f2 - f0) / (x(w2) - x(w0));
    worst = std::max(worst, std::abs(slope1 - slope2) /
                                std::max({1.0, std::abs(slope1), std::abs(slope2)}));
  }
  return worst;
}

IsospectralityReport isospectrality_check(const TodaState& s, std::complex<double> w, double dt,
                                          std::size_t steps, LaxConvention conv) {
  IsospectralityReport rep;
  rep.initial = lax_spectrum(s, w, conv);
  const TodaState fin = toda_evolve(s, dt, steps);
  rep.final = lax_spectrum(fin, w, conv);
  for (std::size_t k = 0; k < rep.initial.size(); ++k) {
    rep.max_drift = std::max(rep.max_drift, std::abs(rep.initial[k] - rep.final[k]));
  }
  const double h0 = hamiltonian(s);
  const double h1 = hamiltonian(fin);
  rep.energy_drift = std::abs(h1 - h0) / (h0 != 0.0 ? std::abs(h0) : 1.0);
  rep.curve_residual = spectral_curve_residual(s, w, conv);
  return rep;
}

double monodromy_trace(const TodaState& s, double lambda) {
  s.validate();
  const double rk = std::sqrt(s.kappa);
  Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    Eigen::Matrix2d li;
    li << lambda + s.p[i], rk * std::exp(s.mu[i]), -rk * std::exp(-s.mu[i]), 0.0;
    m = m * li;
  }
  return m.trace();
}

} // namespace bdheap
