#include "bdheap/hyperbolic_walk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bdheap/errors.hpp"
#include "bdheap/parallel.hpp"

namespace bdheap {
namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt3 = std::sqrt(3.0);

double increment_of_psi(double x) { return std::log(5.0 / 3.0 + 4.0 / 3.0 * std::cos(2.0 * x)); }

struct Batch {
  double slope_sum = 0.0; // mu gained in the batch
  std::size_t steps = 0;
  MeasureHistogram hist;
};

} // namespace

Isometry Isometry::operator*(const Isometry& o) const {
  return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

std::array<Isometry, 3> gamma2_generators() {
  return {Isometry{1.0, -2.0 / kSqrt3, 0.0, -1.0}, Isometry{1.0, 2.0 / kSqrt3, 0.0, -1.0},
          Isometry{0.0, 1.0 / kSqrt3, kSqrt3, 0.0}};
}

double QSqrt3::to_double() const { return r.get_d() + s.get_d() * std::sqrt(3.0); }

ExactIsometry ExactIsometry::operator*(const ExactIsometry& o) const {
  return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

ExactIsometry ExactIsometry::identity() {
  return {QSqrt3{1, 0}, QSqrt3{0, 0}, QSqrt3{0, 0}, QSqrt3{1, 0}};
}

std::array<ExactIsometry, 3> gamma2_generators_exact() {
  // 2/sqrt3 = (2/3) sqrt3 and 1/sqrt3 = (1/3) sqrt3.
  const QSqrt3 zero{0, 0};
  const QSqrt3 one{1, 0};
  const QSqrt3 minus_one{-1, 0};
  const QSqrt3 two_over{0, mpq_class(2, 3)};
  const QSqrt3 minus_two_over{0, mpq_class(-2, 3)};
  const QSqrt3 one_over{0, mpq_class(1, 3)};
  const QSqrt3 root{0, 1};
  return {ExactIsometry{one, minus_two_over, zero, minus_one},
          ExactIsometry{one, two_over, zero, minus_one},
          ExactIsometry{zero, one_over, root, zero}};
}

double hyperbolic_distance(const Isometry& v) {
  const double tr = v.a * v.a + v.b * v.b + v.c * v.c + v.d * v.d;
  const double half = tr / 2.0;
  if (half < 1.0) {
    if (half < 1.0 - 1e-12) {
      throw NumericalError("hyperbolic_distance: Tr(VV^T) = " + std::to_string(tr) + " < 2");
    }
    return 0.0;
  }
  return std::acosh(half);
}

double generator_phase(int alpha) { return (2.0 * alpha - 1.0) * kPi / 3.0; }

double distance_increment(double theta, int alpha) {
  return std::log(5.0 / 3.0 + 4.0 / 3.0 * std::cos(2.0 * theta + generator_phase(alpha)));
}

double angle_update(double theta, int alpha) {
  const Isometry h = gamma2_generators()[static_cast<std::size_t>(alpha)];
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  // h^T (c, s).
  const double nc = h.a * c + h.c * s;
  const double ns = h.b * c + h.d * s;
  double t = std::atan2(ns, nc);
  if (t < 0.0) t += kPi;
  if (t >= kPi) t -= kPi;
  return t;
}

WalkState walk_step(WalkState st, RngStream& rng, double p_plus_one) {
  const int shift = rng.bernoulli(p_plus_one) ? 1 : 2;
  const int next = (st.alpha + shift) % 3;
  st.mu += distance_increment(st.theta, next);
  st.theta = angle_update(st.theta, next);
  st.alpha = next;
  ++st.n;
  return st;
}

double folded_angle(double theta, int next_alpha) {
  double psi = std::fmod(theta + generator_phase(next_alpha) / 2.0 + kPi / 2.0, kPi);
  if (psi < 0.0) psi += kPi;
  return std::abs(psi - kPi / 2.0);
}

MeasureHistogram::MeasureHistogram(std::size_t bins) : counts_(bins, 0) {
  if (bins == 0) throw DomainError("MeasureHistogram: need at least one bin");
}

void MeasureHistogram::add(double x) {
  const double w = bin_width();
  auto k = static_cast<std::ptrdiff_t>(std::floor(x / w));
  if (k < 0 || k >= static_cast<std::ptrdiff_t>(counts_.size())) {
    ++clamped_;
    k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(counts_.size()) - 1);
  }
  ++counts_[static_cast<std::size_t>(k)];
  ++total_;
}

void MeasureHistogram::merge(const MeasureHistogram& other) {
  if (other.counts_.size() != counts_.size()) {
    throw DomainError("MeasureHistogram: bin counts differ");
  }
  for (std::size_t k = 0; k < counts_.size(); ++k) counts_[k] += other.counts_[k];
  total_ += other.total_;
  clamped_ += other.clamped_;
}

std::vector<double> MeasureHistogram::density() const {
  std::vector<double> d(counts_.size(), 0.0);
  if (total_ == 0) return d;
  const double norm = static_cast<double>(total_) * bin_width();
  for (std::size_t k = 0; k < counts_.size(); ++k) d[k] = static_cast<double>(counts_[k]) / norm;
  return d;
}

double MeasureHistogram::expectation(const std::function<double(double)>& f) const {
  if (total_ == 0) throw DomainError("MeasureHistogram: empty histogram");
  static constexpr std::array<double, 5> node{-0.9061798459386640, -0.5384693101056831, 0.0,
                                              0.5384693101056831, 0.9061798459386640};
  static constexpr std::array<double, 5> weight{0.2369268850561891, 0.4786286704993665,
                                                0.5688888888888889, 0.4786286704993665,
                                                0.2369268850561891};
  const double w = bin_width();
  double acc = 0.0;
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    if (counts_[k] == 0) continue;
    const double mid = (static_cast<double>(k) + 0.5) * w;
    double avg = 0.0;
    for (std::size_t q = 0; q < node.size(); ++q) avg += weight[q] * f(mid + 0.5 * w * node[q]);
    avg *= 0.5;
    acc += static_cast<double>(counts_[k]) * avg;
  }
  return acc / static_cast<double>(total_);
}

LyapunovResult lyapunov_gamma(std::size_t n_steps, std::size_t trials, const RngStream& rng,
                              GammaMethod method, const WalkOptions& opt) {
  if (n_steps < 10000) throw DomainError("lyapunov_gamma: need at least 10^4 steps");
  if (trials < 1) throw DomainError("lyapunov_gamma: need at least one trial");
  if (!(opt.burn_in_fraction >= 0.0 && opt.burn_in_fraction < 1.0)) {
    throw DomainError("lyapunov_gamma: burn-in fraction must lie in [0, 1)");
  }
  if (!(opt.p_plus_one >= 0.0 && opt.p_plus_one <= 1.0)) {
    throw DomainError("lyapunov_gamma: p_plus_one must lie in [0, 1]");
  }
  const std::size_t nb = std::max<std::size_t>(1, opt.batches_per_trial);
  const auto burn = static_cast<std::size_t>(opt.burn_in_fraction * static_cast<double>(n_steps));
  const std::size_t kept = n_steps - burn;
  if (kept < nb) throw DomainError("lyapunov_gamma: fewer kept steps than batches");

  std::vector<std::vector<Batch>> per_trial(trials);
  parallel_for(trials, opt.threads, [&](std::size_t trial) {
    RngStream r = rng.child(trial);
    WalkState st;
    for (std::size_t k = 0; k < burn; ++k) st = walk_step(st, r, opt.p_plus_one);
    auto& batches = per_trial[trial];
    batches.reserve(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      Batch batch{0.0, 0, MeasureHistogram(method == GammaMethod::measure_integral ? opt.bins : 1)};
      const std::size_t len = kept / nb + (b < kept % nb ? 1 : 0);
      const double mu0 = st.mu;
      for (std::size_t k = 0; k < len; ++k) {
        const int shift = r.bernoulli(opt.p_plus_one) ? 1 : 2;
        const int next = (st.alpha + shift) % 3;
        if (method == GammaMethod::measure_integral) batch.hist.add(folded_angle(st.theta, next));
        st.mu += distance_increment(st.theta, next);
        st.theta = angle_update(st.theta, next);
        st.alpha = next;
        ++st.n;
      }
      batch.slope_sum = st.mu - mu0;
      batch.steps = len;
      batches.push_back(std::move(batch));
    }
  });

  LyapunovResult res;
  res.histogram = MeasureHistogram(method == GammaMethod::measure_integral ? opt.bins : 1);
  std::vector<double> estimates;
  for (const auto& batches : per_trial) {
    for (const auto& b : batches) {
      res.samples += b.steps;
      if (method == GammaMethod::montecarlo) {
        estimates.push_back(b.slope_sum / static_cast<double>(b.steps));
      } else {
        estimates.push_back(b.hist.expectation(increment_of_psi));
        res.histogram.merge(b.hist);
      }
    }
  }
  if (method == GammaMethod::montecarlo) {
    double total = 0.0;
    for (const auto& batches : per_trial)
      for (const auto& b : batches) total += b.slope_sum;
    res.gamma = total / static_cast<double>(res.samples);
  } else {
    res.gamma = res.histogram.expectation(increment_of_psi);
    if (res.histogram.clamped() > 0) {
      res.warnings.push_back(std::to_string(res.histogram.clamped()) +
                             " angle samples fell outside [0, pi/3) and were clamped");
    }
  }
  if (estimates.size() > 1) {
    double m = 0.0;
    for (double e : estimates) m += e;
    m /= static_cast<double>(estimates.size());
    double s2 = 0.0;
    for (double e : estimates) s2 += (e - m) * (e - m);
    res.std_error = std::sqrt(s2 / static_cast<double>(estimates.size() - 1) /
                              static_cast<double>(estimates.size()));
  }
  if (res.samples < 100000) {
    res.warnings.push_back("fewer than 1e5 post-burn-in steps; error bar is rough");
  }
  if (res.std_error > 0.01) {
    res.warnings.push_back("standard error above 0.01; increase steps or trials");
  }
  return res;
}

double deterministic_orbit_gamma() {
  const auto h = gamma2_generators();
  const Isometry p = h[1] * h[2] * h[0];
  const double tr = p.a + p.d;
  const double det = p.det();
  const double disc = tr * tr - 4.0 * det;
  double rho;
  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    rho = std::max(std::abs((tr + sq) / 2.0), std::abs((tr - sq) / 2.0));
  } else {
    rho = std::sqrt(std::abs(det));
  }
  return 2.0 / 3.0 * std::log(rho);
}

} // namespace bdheap
