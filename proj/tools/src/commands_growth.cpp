#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <sstream>

#include <bdheap/analysis.hpp>
#include <bdheap/deposition.hpp>
#include <bdheap/errors.hpp>
#include <bdheap/heap_words.hpp>
#include <bdheap/hyperbolic_walk.hpp>
#include <bdheap/matrix_growth.hpp>

#include "bdheap_tools/commands.hpp"

namespace bdheap::cli {
namespace {

Boundary parse_boundary(const std::string& s) {
  if (s == "free") return Boundary::free;
  if (s == "periodic") return Boundary::periodic;
  throw DomainError("unknown boundary '" + s + "' (free or periodic)");
}

std::vector<std::size_t> parse_sizes(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      const long v = std::stol(tok, &pos);
      if (pos != tok.size() || v <= 0) throw DomainError("");
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw DomainError("bad size '" + tok + "' in --sizes");
    }
  }
  if (out.empty()) throw DomainError("--sizes is empty");
  return out;
}

nlohmann::json fit_json(const FitResult& f) {
  return {{"exponent", f.exponent},     {"std_error", f.std_error},
          {"window_min", f.window_min}, {"window_max", f.window_max},
          {"points", f.points},         {"residual_norm", f.residual_norm},
          {"warnings", f.warnings}};
}

nlohmann::json moments_json(const Moments& m) {
  return {{"n", m.n},
          {"mean", m.mean},
          {"variance", m.variance},
          {"skewness", m.skewness},
          {"skewness_se", m.skewness_se},
          {"excess_kurtosis", m.excess_kurtosis},
          {"kurtosis_se", m.kurtosis_se},
          {"warnings", m.warnings}};
}

CommandResult deposit_single(const DepositOptions& o, Boundary bc, OutputSink& sink) {
  const std::size_t stride = o.stride ? o.stride : std::max<std::size_t>(1, o.c.t / 100);
  RngStream rng = RngStream(o.c.seed, 0).child(0);
  std::vector<TrajectoryRow> rows;
  const SimulationResult sim = simulate_recorded(o.c.n, o.c.t, rng, bc, stride, rows);

  Table t{{"t", "column", "h_max", "width2"}, {}};
  for (const auto& r : rows) {
    t.add({static_cast<std::int64_t>(r.t), static_cast<std::int64_t>(r.column), r.h_max, r.width2});
  }
  sink.table("deposit", t);

  nlohmann::json snap{{"n", o.c.n},
                      {"t", o.c.t},
                      {"boundary", o.bc},
                      {"heights", sim.profile.heights}};
  CommandResult res;
  res.summary = {{"h_max", sim.profile.max()}, {"width2", spatial_variance(sim.profile)}};
  if (o.beta > 0.0) {
    const SoftProfile soft = replay_soft(o.c.n, sim.events, o.beta, bc);
    double gap_min = INFINITY;
    double gap_max = -INFINITY;
    for (std::size_t i = 0; i < o.c.n; ++i) {
      const double g = soft.heights[i] - static_cast<double>(sim.profile.heights[i]);
      gap_min = std::min(gap_min, g);
      gap_max = std::max(gap_max, g);
    }
    snap["beta"] = o.beta;
    snap["soft_heights"] = soft.heights;
    res.summary["soft_gap_min"] = gap_min;
    res.summary["soft_gap_max"] = gap_max;
    res.summary["soft_gap_bound"] = static_cast<double>(o.c.t) * std::log(3.0) / o.beta;
  }
  sink.json("deposit_profile.json", snap);
  return res;
}

CommandResult deposit_ensemble(const DepositOptions& o, Boundary bc, OutputSink& sink) {
  if (o.beta > 0.0) throw DomainError("--beta is only supported with --trials 1");
  const std::size_t stride = o.stride ? o.stride : std::max<std::size_t>(1, o.c.t / 100);
  EnsembleConfig cfg;
  cfg.n_columns = o.c.n;
  cfg.runs = o.c.trials;
  cfg.boundary = bc;
  cfg.threads = o.c.threads;
  cfg.sample_stride = o.sample_stride;
  for (std::size_t t = stride; t < o.c.t; t += stride) cfg.checkpoints.push_back(t);
  cfg.checkpoints.push_back(o.c.t);
  const EnsembleResult ens = simulate_ensemble(cfg, RngStream(o.c.seed, 0));

  const auto& acc = ens.accumulator;
  const double n = static_cast<double>(o.c.n);
  Table t{{"t", "tau", "mean_height", "width", "width_centered"}, {}};
  std::vector<double> taus;
  std::vector<double> means;
  for (std::size_t k = 0; k < cfg.checkpoints.size(); ++k) {
    const std::size_t tk = cfg.checkpoints[k];
    const double tau = static_cast<double>(tk) / n;
    const double mh = acc.mean_height(k);
    t.add({static_cast<std::int64_t>(tk), tau, mh, width(acc, tk, WidthKind::ensemble),
           width(acc, tk, WidthKind::centered)});
    taus.push_back(tau);
    means.push_back(mh);
  }
  sink.table("deposit", t);

  // Velocity from the second half of the checkpoints.
  const std::size_t first = taus.size() >= 4 ? taus.size() / 2 : 0;
  nlohmann::json report{{"tau", taus.back()}, {"tw_goe_reference",
                                               {{"skewness", kTwGoeSkewness},
                                                {"excess_kurtosis", kTwGoeExcessKurtosis}}}};
  double v = means.back() / taus.back();
  if (taus.size() - first >= 2) {
    v = least_squares(std::span(taus).subspan(first), std::span(means).subspan(first)).slope;
  }
  report["velocity"] = v;
  const auto& cols = ens.column_samples.back();
  if (!cols.empty()) {
    report["column"] = moments_json(height_moments(rescale_heights(cols, taus.back(), v)));
  }
  report["h_max"] =
      moments_json(height_moments(rescale_heights(ens.max_heights.back(), taus.back(), v)));
  sink.json("deposit_moments.json", report);

  CommandResult res;
  res.summary = {{"tau", taus.back()},
                 {"width", width(acc, o.c.t, WidthKind::ensemble)},
                 {"velocity", v}};
  return res;
}

} // namespace

CommandResult cmd_deposit(const DepositOptions& o, OutputSink& sink) {
  if (o.c.n == 0) throw DomainError("--n must be positive");
  if (o.c.trials == 0) throw DomainError("--trials must be positive");
  const Boundary bc = parse_boundary(o.bc);
  if (o.c.trials == 1) return deposit_single(o, bc, sink);
  if (o.c.t == 0) throw DomainError("--t must be positive for an ensemble");
  return deposit_ensemble(o, bc, sink);
}

CommandResult cmd_collapse(const CollapseOptions& o, OutputSink& sink) {
  const Boundary bc = parse_boundary(o.bc);
  WidthKind kind;
  if (o.width == "centered") {
    kind = WidthKind::centered;
  } else if (o.width == "ensemble") {
    kind = WidthKind::ensemble;
  } else {
    throw DomainError("unknown --width '" + o.width + "' (centered or ensemble)");
  }
  if (!(o.umin > 0.0) || !(o.umax > o.umin)) throw DomainError("need 0 < --umin < --umax");
  if (o.c.trials < 2) throw DomainError("--trials must be at least 2");
  const auto sizes = parse_sizes(o.sizes);

  const RngStream root(o.c.seed, 0);
  std::vector<WidthSeries> series;
  Table t{{"N", "tau", "u", "width", "scaled_width"}, {}};
  auto growth = nlohmann::json::array();
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const std::size_t n = sizes[k];
    const double n32 = std::pow(static_cast<double>(n), 1.5);
    EnsembleConfig cfg;
    cfg.n_columns = n;
    cfg.runs = o.c.trials;
    cfg.boundary = bc;
    cfg.threads = o.c.threads;
    cfg.checkpoints = log_spaced_checkpoints(n, o.umin * n32, o.umax * n32, o.points);
    const EnsembleResult ens = simulate_ensemble(cfg, root.child(k));
    WidthSeries s = width_series(ens.accumulator, kind);
    std::ostringstream dat;
    dat << "# N=" << n << "\n# u  W/N^(1/2)\n";
    for (const auto& p : s.points) {
      const double u = p.tau / n32;
      const double sw = p.width / std::sqrt(static_cast<double>(n));
      t.add({static_cast<std::int64_t>(n), p.tau, u, p.width, sw});
      dat << format_double(u) << ' ' << format_double(sw) << '\n';
    }
    sink.text("collapse_N" + std::to_string(n) + ".dat", dat.str());
    nlohmann::json g{{"N", n}};
    try {
      g["fit"] = fit_json(growth_exponent_u(s, o.growth_umin, o.growth_umax));
    } catch (const DomainError& e) {
      g["error"] = e.what();
    }
    growth.push_back(g);
    series.push_back(std::move(s));
  }
  sink.table("collapse", t);

  CommandResult res;
  nlohmann::json report{{"width", o.width}, {"growth", growth}};
  if (series.size() >= 3) {
    const CollapseReport rep = collapse(series, 24, o.usat);
    report["comparable"] = rep.comparable;
    report["overlap"] = {rep.overlap_min, rep.overlap_max};
    report["mismatch"] = rep.mismatch;
    report["roughness"] = fit_json(rep.roughness);
  } else {
    report["comparable"] = false;
    report["note"] = "collapse needs at least three sizes";
  }
  sink.json("collapse_report.json", report);
  res.summary = report;
  res.summary.erase("growth");
  return res;
}

CommandResult cmd_gamma(const GammaOptions& o, OutputSink& sink) {
  if (o.checkpoints == 0) throw DomainError("--checkpoints must be positive");
  GammaConfig cfg;
  cfg.n_columns = o.c.n;
  cfg.t_max = o.c.t;
  cfg.trials = o.c.trials;
  cfg.threads = o.c.threads;
  cfg.measure = BlockMeasure{o.r0, o.x0};
  cfg.measure.validate();
  if (o.mode == "coupled") {
    cfg.mode = GammaMode::coupled;
  } else if (o.mode == "independent") {
    cfg.mode = GammaMode::independent;
  } else {
    throw DomainError("unknown --mode '" + o.mode + "' (coupled or independent)");
  }
  if (o.radial == "singular") {
    cfg.radial = RadialMode::singular_values;
  } else if (o.radial == "eigen") {
    cfg.radial = RadialMode::eigen_modulus;
  } else {
    throw DomainError("unknown --radial '" + o.radial + "' (singular or eigen)");
  }
  for (std::size_t k = 1; k <= o.checkpoints; ++k) {
    const std::size_t t = o.c.t * k / o.checkpoints;
    if (t > 0 && (cfg.checkpoints.empty() || t > cfg.checkpoints.back())) {
      cfg.checkpoints.push_back(t);
    }
  }
  const GammaResult r = gamma_estimator(cfg, RngStream(o.c.seed, 0));

  Table t{{"T", "mean", "stderr", "trials", "discarded"}, {}};
  for (const auto& p : r.points) {
    t.add({static_cast<std::int64_t>(p.t), p.mean, p.std_error,
           static_cast<std::int64_t>(p.samples), static_cast<std::int64_t>(p.discarded)});
  }
  sink.table("gamma", t);
  nlohmann::json fit{{"N", o.c.n},
                     {"gamma0", r.gamma0()},
                     {"gamma0_stderr", r.extrapolation.intercept_stderr},
                     {"slope", r.extrapolation.slope},
                     {"measure", {{"r0", o.r0}, {"x0", o.x0}}},
                     {"mode", o.mode},
                     {"radial", o.radial}};
  sink.json("gamma_fit.json", fit);
  CommandResult res;
  res.summary = fit;
  return res;
}

CommandResult cmd_lyapunov(const LyapunovOptions& o, OutputSink& sink) {
  const bool mc = o.method == "montecarlo" || o.method == "both";
  const bool mi = o.method == "measure" || o.method == "both";
  if (!mc && !mi) throw DomainError("unknown --method '" + o.method + "' (montecarlo, measure, both)");
  WalkOptions opts;
  opts.p_plus_one = o.p;
  opts.bins = o.bins;
  opts.burn_in_fraction = o.burn_in;
  opts.threads = o.c.threads;
  const RngStream root(o.c.seed, 0);

  Table t{{"method", "gamma", "stderr", "samples"}, {}};
  nlohmann::json report = nlohmann::json::object();
  std::optional<LyapunovResult> rmc;
  std::optional<LyapunovResult> rmi;
  if (mc) {
    rmc = lyapunov_gamma(o.steps, o.c.trials, root.child(0), GammaMethod::montecarlo, opts);
    t.add({std::string("montecarlo"), rmc->gamma, rmc->std_error,
           static_cast<std::int64_t>(rmc->samples)});
    report["montecarlo"] = {{"gamma", rmc->gamma}, {"std_error", rmc->std_error},
                            {"warnings", rmc->warnings}};
  }
  if (mi) {
    rmi = lyapunov_gamma(o.steps, o.c.trials, root.child(1), GammaMethod::measure_integral, opts);
    t.add({std::string("measure_integral"), rmi->gamma, rmi->std_error,
           static_cast<std::int64_t>(rmi->samples)});
    report["measure_integral"] = {{"gamma", rmi->gamma}, {"std_error", rmi->std_error},
                                  {"warnings", rmi->warnings}};
    const auto& h = rmi->histogram;
    const auto dens = h.density();
    Table ht{{"bin_lo", "bin_hi", "count", "density"}, {}};
    for (std::size_t b = 0; b < h.bins(); ++b) {
      ht.add({static_cast<double>(b) * h.bin_width(), static_cast<double>(b + 1) * h.bin_width(),
              static_cast<std::int64_t>(h.counts()[b]), dens[b]});
    }
    sink.table("lyapunov_histogram", ht);
  }
  sink.table("lyapunov", t);
  if (rmc && rmi) {
    const double d = std::abs(rmc->gamma - rmi->gamma);
    const double joint = std::hypot(rmc->std_error, rmi->std_error);
    report["difference"] = d;
    report["joint_error"] = joint;
    report["agree"] = d <= 2.0 * joint;
  }
  report["deterministic_orbit_gamma"] = deterministic_orbit_gamma();
  sink.json("lyapunov_report.json", report);
  CommandResult res;
  res.summary = report;
  return res;
}

CommandResult cmd_words(const WordsOptions& o, OutputSink& sink) {
  if (o.c.n == 0) throw DomainError("--n must be positive");
  const int ng = static_cast<int>(o.c.n);
  Word w;
  if (o.word.empty()) {
    RngStream rng(o.c.seed, 0);
    ColumnSequence seq;
    for (std::size_t k = 0; k < o.c.t; ++k) seq.events.push_back(1 + rng.uniform_index(o.c.n));
    w = Word::from_columns(seq, ng);
  } else {
    w = parse_word(o.word, ng);
  }

  Table t{{"form", "word"}, {}};
  t.add({std::string("input"), format_word(w)});
  CommandResult res;
  res.summary["input"] = format_word(w);
  Word positive = w;
  if (!w.is_positive()) {
    positive = reduce_colored(w);
    t.add({std::string("reduced"), format_word(positive)});
    res.summary["reduced"] = format_word(positive);
  }
  if (positive.is_positive()) {
    const Word nf = normal_form(positive);
    const Heap heap = word_to_heap(positive);
    const Word back = heap_to_word(heap);
    const bool round_trip = back == nf && same_shape(word_to_heap(back), heap);
    t.add({std::string("normal_form"), format_word(nf)});
    res.summary["normal_form"] = format_word(nf);
    res.summary["round_trip"] = round_trip;
    sink.text("words_heap.json", heap_to_json(heap) + "\n");
    if (!round_trip) res.ok = false;
  }
  sink.table("words", t);
  return res;
}

} // namespace bdheap::cli
