// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--only 1,4,...] [--expect-fail 2,3]
//
// Exit status is 0 when the set of failing criteria equals the expected set
// (empty by default), 1 otherwise.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <bdheap/analysis.hpp>
#include <bdheap/anderson.hpp>
#include <bdheap/deposition.hpp>
#include <bdheap/heap_words.hpp>
#include <bdheap/hyperbolic_walk.hpp>
#include <bdheap/lie.hpp>
#include <bdheap/matrix_growth.hpp>
#include <bdheap/painleve.hpp>
#include <bdheap/parallel.hpp>
#include <bdheap/rng.hpp>
#include <bdheap/toda.hpp>

using namespace bdheap;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

const unsigned kThreads = default_threads();

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ColumnSequence random_events(std::size_t n, std::size_t t, RngStream& rng) {
  ColumnSequence s;
  s.events.reserve(t);
  for (std::size_t k = 0; k < t; ++k) s.events.push_back(1 + rng.uniform_index(n));
  return s;
}

Outcome growth_exponent_check() {
  const std::size_t n = 512;
  const double n32 = std::pow(static_cast<double>(n), 1.5);
  EnsembleConfig cfg;
  cfg.n_columns = n;
  cfg.runs = 200;
  cfg.threads = kThreads;
  cfg.checkpoints = log_spaced_checkpoints(n, 0.5, 0.1 * n32, 64);
  const auto t0 = std::chrono::steady_clock::now();
  const auto ens = simulate_ensemble(cfg, RngStream(1, 0));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto fit = growth_exponent_u(width_series(ens.accumulator), 0.002, 0.1);
  const bool pass = std::abs(fit.exponent - 1.0 / 3.0) <= 0.05 && secs < 300.0;
  return {pass, fmt("beta = %.4f +- %.4f over u in [0.002, 0.1] (%zu points), target 1/3 +- 0.05, %.1f s",
                    fit.exponent, fit.std_error, fit.points, secs)};
}

Outcome collapse_check() {
  const RngStream root(2, 0);
  std::vector<WidthSeries> series;
  const std::vector<std::size_t> sizes{16, 32, 64, 128};
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const std::size_t n = sizes[k];
    const double n32 = std::pow(static_cast<double>(n), 1.5);
    EnsembleConfig cfg;
    cfg.n_columns = n;
    cfg.runs = 200;
    cfg.threads = kThreads;
    cfg.checkpoints = log_spaced_checkpoints(n, 0.05 * n32, 10.0 * n32, 40);
    series.push_back(width_series(simulate_ensemble(cfg, root.child(k)).accumulator,
                                  WidthKind::centered));
  }
  const auto rep = collapse(series, 24, 3.0);
  const bool pass = rep.comparable && std::abs(rep.roughness.exponent - 0.5) <= 0.07 &&
                    rep.mismatch < 0.1;
  return {pass, fmt("alpha = %.4f +- %.4f (target 0.5 +- 0.07), mismatch = %.3f over u in "
                    "[%.3g, %.3g] (target < 0.1)",
                    rep.roughness.exponent, rep.roughness.std_error, rep.mismatch,
                    rep.overlap_min, rep.overlap_max)};
}

Outcome gamma_check() {
  std::vector<double> g0;
  std::string detail;
  for (std::size_t n : {10u, 20u, 40u}) {
    GammaConfig cfg;
    cfg.n_columns = n;
    cfg.t_max = 10000;
    cfg.trials = 32;
    cfg.threads = kThreads;
    const auto res = gamma_estimator(cfg, RngStream(3, n));
    g0.push_back(res.gamma0());
    detail += fmt("N=%zu: %.4f; ", n, res.gamma0());
  }
  const auto [lo, hi] = std::minmax_element(g0.begin(), g0.end());
  const bool band = *lo >= 0.75 && *hi <= 0.85;
  const bool spread = *hi - *lo < 0.05;
  detail += fmt("band [0.75, 0.85] %s, N-spread %.4f %s", band ? "met" : "missed", *hi - *lo,
                spread ? "< 0.05" : ">= 0.05");
  return {band && spread, detail};
}

Outcome lyapunov_check() {
  WalkOptions opt;
  opt.threads = kThreads;
  const auto t0 = std::chrono::steady_clock::now();
  const auto mc = lyapunov_gamma(1000000, 4, RngStream(4, 0), GammaMethod::montecarlo, opt);
  const auto ms = lyapunov_gamma(1000000, 4, RngStream(4, 1), GammaMethod::measure_integral, opt);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double joint = std::hypot(mc.std_error, ms.std_error);
  const bool agree = std::abs(mc.gamma - ms.gamma) <= 2.0 * joint;
  const bool pass = std::abs(mc.gamma - 0.79) <= 0.02 && std::abs(ms.gamma - 0.79) <= 0.02 &&
                    agree && secs < 60.0;
  return {pass, fmt("monte carlo %.5f +- %.5f, measure %.5f +- %.5f, |diff| %.5f vs 2 sigma %.5f, %.1f s",
                    mc.gamma, mc.std_error, ms.gamma, ms.std_error, std::abs(mc.gamma - ms.gamma),
                    2.0 * joint, secs)};
}

Outcome tropical_check() {
  std::size_t checked = 0, mismatches = 0;
  for (std::size_t n = 1; n <= 5; ++n) {
    for (std::size_t t = 0; t <= 10; ++t) {
      ColumnSequence seq{std::vector<Column>(t, 1)};
      while (true) {
        ++checked;
        if (!(tropical_heights(seq, n) == replay_hard(n, seq))) ++mismatches;
        std::size_t k = 0;
        while (k < t && seq.events[k] == n) seq.events[k++] = 1;
        if (k == t) break;
        ++seq.events[k];
      }
    }
  }
  const std::size_t exhaustive = checked;
  RngStream rng(5, 0);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(8);
    const auto seq = random_events(n, rng.uniform_index(65), rng);
    ++checked;
    if (!(tropical_heights(seq, n) == replay_hard(n, seq))) ++mismatches;
  }
  return {mismatches == 0, fmt("%zu exhaustive + %zu random sequences, %zu mismatches", exhaustive,
                               checked - exhaustive, mismatches)};
}

Outcome words_check() {
  const Word w = parse_word("3 6 1 4 1 2 5 3 1 5 3 6 2", 6);
  const std::string nf = format_word(normal_form(w));
  const bool example = nf == "1 1 3 2 1 4 3 3 2 6 5 5 6";
  RngStream rng(6, 0);
  std::size_t failures = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    Word r;
    r.n_generators = 1 + static_cast<int>(rng.uniform_index(8));
    const std::size_t len = rng.uniform_index(40);
    for (std::size_t k = 0; k < len; ++k) {
      r.letters.push_back({1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(r.n_generators))), 1});
    }
    const Heap h = word_to_heap(r);
    const Word back = heap_to_word(h);
    if (!(back == normal_form(r)) || !same_shape(word_to_heap(back), h)) ++failures;
  }
  return {example && failures == 0,
          fmt("normal form '%s' %s; 10000 round trips, %zu failures", nf.c_str(),
              example ? "matches" : "differs", failures)};
}

Outcome sandwich_check() {
  std::size_t runs = 0, violations = 0;
  double worst_ratio = 0.0;
  RngStream rng(7, 0);
  for (double beta : {10.0, 50.0, 100.0}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 2 + rng.uniform_index(31);
      const std::size_t t = 1 + rng.uniform_index(2000);
      const auto seq = random_events(n, t, rng);
      const auto hard = replay_hard(n, seq);
      const auto soft = replay_soft(n, seq, beta);
      const double bound = static_cast<double>(t) * std::log(3.0) / beta;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = soft.heights[i] - static_cast<double>(hard.heights[i]);
        // The bound is attained exactly (e.g. T = 1 on a flat profile), so
        // allow a few ulps of the height for rounding.
        const double slack = 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + soft.heights[i]);
        if (d < -slack || d > bound + slack) ++violations;
        worst_ratio = std::max(worst_ratio, d / bound);
      }
      ++runs;
    }
  }
  return {violations == 0, fmt("%zu runs at beta in {10, 50, 100}, %zu violations beyond rounding, largest gap %.3f of the bound",
                               runs, violations, worst_ratio)};
}

Outcome integrable_check() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto q = yablonskii(12);
  bool yv = true;
  for (std::size_t j = 0; j < q.size(); ++j) {
    yv = yv && has_integer_coefficients(q[j]) && q[j].degree() == static_cast<long>(j * (j + 1) / 2);
  }
  bool pii = true;
  for (int j = 0; j <= 10; ++j) pii = pii && painleve2_residual(q, j).is_zero();
  const auto sigma = sigma_gauge_check(10);
  const auto lie = lie_checks();
  const bool casimir = lie.casimir_is_scalar && lie.casimir_scalar == mpq_class(8, 3);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool pass = yv && pii && sigma.passed && lie.all_passed() && casimir && secs < 30.0;
  return {pass, fmt("Q_j integer/degree %s, Painleve II %s, sigma gauge %s, Lie %s, Casimir %s I, %.2f s",
                    yv ? "ok" : "bad", pii ? "zero" : "nonzero", sigma.passed ? "ok" : "bad",
                    lie.all_passed() ? "ok" : "bad", to_string(lie.casimir_scalar).c_str(), secs)};
}

Outcome toda_check() {
  double energy = 0.0, spectrum = 0.0, reversal = 0.0;
  RngStream rng(9, 0);
  for (std::size_t n : {3u, 4u, 8u, 12u, 16u}) {
    TodaState s;
    s.bc = TodaBoundary::periodic;
    for (std::size_t j = 0; j < n; ++j) s.mu.push_back(rng.uniform(-0.5, 0.5));
    for (std::size_t j = 0; j < n; ++j) s.p.push_back(rng.uniform(-0.5, 0.5));
    const auto rep = isospectrality_check(s, 1.0, 1e-3, 10000);
    energy = std::max(energy, rep.energy_drift);
    spectrum = std::max(spectrum, rep.max_drift);
    reversal = std::max(reversal, time_reversal_error(s, 1e-3, 10000));
  }
  const bool pass = energy < 1e-8 && spectrum < 1e-8 && reversal < 1e-6;
  return {pass, fmt("N in {3,4,8,12,16}, t = 10, dt = 1e-3: energy drift %.2e, spectrum drift %.2e, "
                    "time reversal %.2e",
                    energy, spectrum, reversal)};
}

Outcome anderson_check() {
  const RngStream root(10, 0);
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    RngStream rng = root.child(k);
    worst = std::max(worst, anderson_duality_check(random_potential(50, 2.0, rng)).max_residual);
  }
  return {worst < 1e-8, fmt("N = 50, 100 potentials in [-1, 1]: max residual %.2e", worst)};
}

Outcome tracy_widom_check() {
  const std::size_t n = 1024;
  EnsembleConfig cfg;
  cfg.n_columns = n;
  cfg.runs = 1250;
  cfg.boundary = Boundary::periodic;
  cfg.sample_stride = 64;
  cfg.threads = kThreads;
  cfg.checkpoints = {1024 * n, 2048 * n};
  const auto ens = simulate_ensemble(cfg, RngStream(11, 0));
  const double tau1 = 1024.0, tau2 = 2048.0;
  const double v = (ens.accumulator.mean_height(1) - ens.accumulator.mean_height(0)) / (tau2 - tau1);
  const auto m1 = height_moments(rescale_heights(ens.column_samples[0], tau1, v));
  const auto m2 = height_moments(rescale_heights(ens.column_samples[1], tau2, v));
  const bool positive = m1.skewness > 0.0 && m2.skewness > 0.0;
  const double change = std::abs(m2.skewness - m1.skewness) / m1.skewness;
  const bool pass = positive && change <= 0.2;
  return {pass, fmt("v = %.4f; tau 1024: skew %.3f +- %.3f, kurt %.3f; tau 2048: skew %.3f +- %.3f, "
                    "kurt %.3f; change %.1f%% (limit 20%%); GOE reference skew %.4f, kurt %.4f",
                    v, m1.skewness, m1.skewness_se, m1.excess_kurtosis, m2.skewness, m2.skewness_se,
                    m2.excess_kurtosis, 100.0 * change, kTwGoeSkewness, kTwGoeExcessKurtosis)};
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(std::stoi(item));
  }
  return out;
}

} // namespace

int main(int argc, char** argv) {
  std::set<int> expected, only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if ((a == "--expect-fail" || a == "--only") && i + 1 < argc) {
      (a == "--only" ? only : expected) = parse_list(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--only LIST] [--expect-fail LIST]\n");
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "growth exponent", growth_exponent_check},
      {2, "scaling collapse", collapse_check},
      {3, "gamma_N band", gamma_check},
      {4, "Gamma_2 Lyapunov exponent", lyapunov_check},
      {5, "tropical equals direct", tropical_check},
      {6, "word engine", words_check},
      {7, "soft/hard sandwich", sandwich_check},
      {8, "exact integrable suite", integrable_check},
      {9, "Toda numerics", toda_check},
      {10, "Anderson duality", anderson_check},
      {11, "height distribution skewness", tracy_widom_check},
  };

  std::set<int> failed, ran;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    ran.insert(c.id);
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) failed.insert(c.id);
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }

  std::set<int> expected_here;
  for (int id : expected) {
    if (ran.count(id)) expected_here.insert(id);
  }
  std::printf("%zu of %zu criteria passed", ran.size() - failed.size(), ran.size());
  if (!expected_here.empty()) std::printf("; expected failures:");
  for (int id : expected_here) std::printf(" %d", id);
  std::printf("\n");
  return failed == expected_here ? 0 : 1;
}
