#include "bdheap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bdheap/errors.hpp"
#include "bdheap/parallel.hpp"

namespace bdheap {

EnsembleAccumulator::EnsembleAccumulator(std::size_t n_columns, std::vector<std::size_t> cps)
    : n_(n_columns), checkpoints_(std::move(cps)) {
  if (n_ == 0) throw DomainError("EnsembleAccumulator: need at least one column");
  for (std::size_t k = 1; k < checkpoints_.size(); ++k) {
    if (checkpoints_[k] <= checkpoints_[k - 1]) {
      throw DomainError("EnsembleAccumulator: checkpoints must be strictly increasing");
    }
  }
  runs_.assign(checkpoints_.size(), 0);
  s1_.assign(checkpoints_.size() * n_, 0);
  s2_.assign(checkpoints_.size() * n_, 0);
  c1_.assign(checkpoints_.size() * n_, 0);
  c2_.assign(checkpoints_.size() * n_, 0);
}

void EnsembleAccumulator::add(std::size_t k, const HeightProfile& p) {
  if (k >= checkpoints_.size()) throw DomainError("EnsembleAccumulator: bad checkpoint index");
  if (p.n_columns() != n_) throw DomainError("EnsembleAccumulator: profile size mismatch");
  wide_int total = 0;
  for (auto h : p.heights) total += h;
  const auto n = static_cast<wide_int>(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const wide_int h = p.heights[i];
    s1_[k * n_ + i] += h;
    s2_[k * n_ + i] += h * h;
    const wide_int c = n * h - total;
    c1_[k * n_ + i] += c;
    c2_[k * n_ + i] += c * c;
  }
  ++runs_[k];
}

void EnsembleAccumulator::merge(const EnsembleAccumulator& o) {
  if (o.n_ != n_ || o.checkpoints_ != checkpoints_) {
    throw DomainError("EnsembleAccumulator: merging incompatible accumulators");
  }
  for (std::size_t k = 0; k < runs_.size(); ++k) runs_[k] += o.runs_[k];
  for (std::size_t k = 0; k < s1_.size(); ++k) {
    s1_[k] += o.s1_[k];
    s2_[k] += o.s2_[k];
    c1_[k] += o.c1_[k];
    c2_[k] += o.c2_[k];
  }
}

std::size_t EnsembleAccumulator::index_of(std::size_t t) const {
  const auto it = std::lower_bound(checkpoints_.begin(), checkpoints_.end(), t);
  if (it == checkpoints_.end() || *it != t) {
    throw DomainError("EnsembleAccumulator: T = " + std::to_string(t) + " is not a checkpoint");
  }
  return static_cast<std::size_t>(it - checkpoints_.begin());
}

double EnsembleAccumulator::mean_column_variance(std::size_t k, WidthKind kind) const {
  const std::size_t r = runs_.at(k);
  if (r < 2) throw ValidationError("width: need at least two runs for a variance");
  // Var_i = (r S2 - S1^2) / r^2, exact in integers until the final division.
  const bool centered = kind == WidthKind::centered;
  const auto& m1 = centered ? c1_ : s1_;
  const auto& m2 = centered ? c2_ : s2_;
  wide_int total = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    const wide_int a = m1[k * n_ + i];
    total += static_cast<wide_int>(r) * m2[k * n_ + i] - a * a;
  }
  const long double rr = static_cast<long double>(r);
  long double v = static_cast<long double>(total) / (rr * rr) / static_cast<long double>(n_);
  if (centered) v /= static_cast<long double>(n_) * static_cast<long double>(n_);
  return static_cast<double>(v);
}

double EnsembleAccumulator::mean_height(std::size_t k) const {
  const std::size_t r = runs_.at(k);
  if (r == 0) throw ValidationError("mean_height: no runs");
  wide_int total = 0;
  for (std::size_t i = 0; i < n_; ++i) total += s1_[k * n_ + i];
  return static_cast<double>(static_cast<long double>(total) /
                             (static_cast<long double>(r) * static_cast<long double>(n_)));
}

double width(const EnsembleAccumulator& acc, std::size_t t, WidthKind kind) {
  return std::sqrt(std::max(0.0, acc.mean_column_variance(acc.index_of(t), kind)));
}

WidthSeries width_series(const EnsembleAccumulator& acc, WidthKind kind) {
  WidthSeries s;
  s.n_columns = acc.n_columns();
  for (std::size_t k = 0; k < acc.checkpoints().size(); ++k) {
    const double tau =
        static_cast<double>(acc.checkpoints()[k]) / static_cast<double>(acc.n_columns());
    s.points.push_back({tau, std::sqrt(std::max(0.0, acc.mean_column_variance(k, kind)))});
  }
  return s;
}

std::vector<std::size_t> log_spaced_checkpoints(std::size_t n, double tau_min, double tau_max,
                                                std::size_t count) {
  if (!(tau_min > 0.0) || !(tau_max >= tau_min) || count == 0) {
    throw DomainError("log_spaced_checkpoints: need 0 < tau_min <= tau_max and count > 0");
  }
  std::vector<std::size_t> out;
  const double a = std::log(tau_min);
  const double b = std::log(tau_max);
  for (std::size_t k = 0; k < count; ++k) {
    const double f = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
    const double tau = std::exp(a + f * (b - a));
    const auto t = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(tau * static_cast<double>(n))));
    if (out.empty() || t > out.back()) out.push_back(t);
  }
  return out;
}

EnsembleResult simulate_ensemble(const EnsembleConfig& cfg, const RngStream& rng) {
  if (cfg.n_columns == 0) throw DomainError("simulate_ensemble: need at least one column");
  if (cfg.checkpoints.empty()) throw DomainError("simulate_ensemble: no checkpoints");
  const std::size_t n = cfg.n_columns;
  const auto& cps = cfg.checkpoints;

  struct RunOut {
    std::vector<HeightProfile> profiles;
  };
  std::vector<RunOut> runs(cfg.runs);
  parallel_for(cfg.runs, cfg.threads, [&](std::size_t r) {
    RngStream s = rng.child(r);
    std::vector<std::int64_t> h(n, 0);
    std::size_t t = 0;
    runs[r].profiles.reserve(cps.size());
    for (std::size_t target : cps) {
      for (; t < target; ++t) deposit_hard_inplace(h, 1 + s.uniform_index(n), cfg.boundary);
      runs[r].profiles.emplace_back(h);
    }
  });

  EnsembleResult res{EnsembleAccumulator(n, cps), {}, {}};
  res.column_samples.resize(cps.size());
  res.max_heights.resize(cps.size());
  for (const auto& run : runs) {
    for (std::size_t k = 0; k < cps.size(); ++k) {
      const auto& p = run.profiles[k];
      res.accumulator.add(k, p);
      res.max_heights[k].push_back(p.max());
      if (cfg.sample_stride > 0) {
        for (std::size_t i = 0; i < n; i += cfg.sample_stride) {
          res.column_samples[k].push_back(p.heights[i]);
        }
      }
    }
  }
  return res;
}

FitResult growth_exponent(const WidthSeries& series, double tau_min, double tau_max) {
  FitResult f;
  f.window_min = tau_min;
  f.window_max = tau_max;
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& p : series.points) {
    if (p.tau >= tau_min && p.tau <= tau_max && p.width > 0.0) {
      x.push_back(std::log(p.tau));
      y.push_back(std::log(p.width));
    }
  }
  if (x.size() < 2) throw DomainError("growth_exponent: fewer than two points in the window");
  if (x.size() < 8) f.warnings.push_back("fewer than 8 points in the fit window");
  if (!series.points.empty()) {
    if (tau_min < series.points.front().tau || tau_max > series.points.back().tau) {
      f.warnings.push_back("fit window extends beyond the data range");
    }
  }
  const double n32 = std::pow(static_cast<double>(series.n_columns), 1.5);
  if (series.n_columns > 0 && tau_max / n32 > 0.3) {
    f.warnings.push_back("fit window reaches u > 0.3 and may include saturation");
  }
  const LinearFit lf = least_squares(x, y);
  f.exponent = lf.slope;
  f.std_error = lf.slope_stderr;
  f.residual_norm = lf.residual_norm;
  f.points = lf.n;
  return f;
}

FitResult growth_exponent_u(const WidthSeries& series, double u_min, double u_max) {
  const double n32 = std::pow(static_cast<double>(series.n_columns), 1.5);
  return growth_exponent(series, u_min * n32, u_max * n32);
}

namespace {

// Linear interpolation of ln W against ln u; requires u inside the curve range.
double interp_log(const CollapseCurve& c, double u) {
  const double lu = std::log(u);
  for (std::size_t k = 1; k < c.u.size(); ++k) {
    if (c.u[k] >= u) {
      const double x0 = std::log(c.u[k - 1]);
      const double x1 = std::log(c.u[k]);
      const double y0 = std::log(c.scaled_width[k - 1]);
      const double y1 = std::log(c.scaled_width[k]);
      const double f = x1 > x0 ? (lu - x0) / (x1 - x0) : 0.0;
      return std::exp(y0 + f * (y1 - y0));
    }
  }
  return c.scaled_width.back();
}

} // namespace

CollapseReport collapse(const std::vector<WidthSeries>& series, std::size_t grid_points,
                        double u_saturation) {
  if (series.size() < 3) throw DomainError("collapse: need at least three system sizes");
  if (grid_points < 2) throw DomainError("collapse: need at least two grid points");
  CollapseReport rep;
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  std::vector<double> log_n;
  std::vector<double> log_wsat;
  for (const auto& s : series) {
    CollapseCurve c{s.n_columns, {}, {}};
    const double n = static_cast<double>(s.n_columns);
    const double n32 = std::pow(n, 1.5);
    double sat_sum = 0.0;
    std::size_t sat_cnt = 0;
    for (const auto& p : s.points) {
      if (!(p.width > 0.0)) continue;
      const double u = p.tau / n32;
      c.u.push_back(u);
      c.scaled_width.push_back(p.width / std::sqrt(n));
      if (u > u_saturation) {
        sat_sum += p.width;
        ++sat_cnt;
      }
    }
    if (c.u.size() < 2) throw DomainError("collapse: a series has fewer than two usable points");
    lo = std::max(lo, c.u.front());
    hi = std::min(hi, c.u.back());
    if (sat_cnt > 0) {
      log_n.push_back(std::log(n));
      log_wsat.push_back(std::log(sat_sum / static_cast<double>(sat_cnt)));
    }
    rep.curves.push_back(std::move(c));
  }
  rep.comparable = lo < hi;
  rep.overlap_min = lo;
  rep.overlap_max = hi;
  if (rep.comparable) {
    for (std::size_t g = 0; g < grid_points; ++g) {
      const double f = static_cast<double>(g) / static_cast<double>(grid_points - 1);
      const double u = std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)));
      double mn = std::numeric_limits<double>::infinity();
      double mx = 0.0;
      double mean = 0.0;
      for (const auto& c : rep.curves) {
        const double w = interp_log(c, u);
        mn = std::min(mn, w);
        mx = std::max(mx, w);
        mean += w;
      }
      mean /= static_cast<double>(rep.curves.size());
      rep.mismatch = std::max(rep.mismatch, (mx - mn) / mean);
    }
  }
  rep.roughness.window_min = u_saturation;
  rep.roughness.window_max = std::numeric_limits<double>::infinity();
  if (log_n.size() >= 2) {
    const LinearFit lf = least_squares(log_n, log_wsat);
    rep.roughness.exponent = lf.slope;
    rep.roughness.std_error = lf.slope_stderr;
    rep.roughness.residual_norm = lf.residual_norm;
    rep.roughness.points = lf.n;
  } else {
    rep.roughness.warnings.push_back("fewer than two sizes reach the saturation window");
  }
  return rep;
}

Moments height_moments(const std::vector<double>& x) {
  Moments m;
  m.n = x.size();
  if (m.n == 0) throw DomainError("height_moments: no samples");
  if (m.n < 10000) m.warnings.push_back("fewer than 1e4 samples; error bars are wide");
  // Two-pass central moments.
  double s = 0.0;
  for (double v : x) s += v;
  m.mean = s / static_cast<double>(m.n);
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  for (double v : x) {
    const double d = v - m.mean;
    const double d2 = d * d;
    c2 += d2;
    c3 += d2 * d;
    c4 += d2 * d2;
  }
  const double n = static_cast<double>(m.n);
  c2 /= n;
  c3 /= n;
  c4 /= n;
  m.variance = m.n > 1 ? c2 * n / (n - 1.0) : 0.0;
  if (c2 > 0.0 && m.n > 3) {
    const double g1 = c3 / std::pow(c2, 1.5);
    const double g2 = c4 / (c2 * c2) - 3.0;
    m.skewness = std::sqrt(n * (n - 1.0)) / (n - 2.0) * g1;
    m.excess_kurtosis = (n - 1.0) / ((n - 2.0) * (n - 3.0)) * ((n + 1.0) * g2 + 6.0);
    m.skewness_se = std::sqrt(6.0 * n * (n - 1.0) / ((n - 2.0) * (n + 1.0) * (n + 3.0)));
    m.kurtosis_se = 2.0 * m.skewness_se * std::sqrt((n * n - 1.0) / ((n - 3.0) * (n + 5.0)));
  }
  return m;
}

std::vector<double> rescale_heights(const std::vector<std::int64_t>& h, double tau, double v) {
  if (!(tau > 0.0)) throw DomainError("rescale_heights: tau must be positive");
  const double s = std::cbrt(tau);
  std::vector<double> out;
  out.reserve(h.size());
  for (auto x : h) out.push_back((static_cast<double>(x) - v * tau) / s);
  return out;
}

} // namespace bdheap
