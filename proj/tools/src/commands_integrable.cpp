#include <algorithm>
#include <cmath>
#include <complex>

#include <bdheap/anderson.hpp>
#include <bdheap/errors.hpp>
#include <bdheap/exp_poly.hpp>
#include <bdheap/lie.hpp>
#include <bdheap/painleve.hpp>
#include <bdheap/parallel.hpp>
#include <bdheap/rational.hpp>
#include <bdheap/rng.hpp>
#include <bdheap/toda.hpp>

#include "bdheap_tools/commands.hpp"

namespace bdheap::cli {
namespace {

TodaBoundary parse_toda_boundary(const std::string& s) {
  if (s == "open") return TodaBoundary::open;
  if (s == "periodic") return TodaBoundary::periodic;
  throw DomainError("unknown boundary '" + s + "' (open or periodic)");
}

std::size_t step_count(double time, double dt) {
  if (!(dt > 0.0) || !(time >= 0.0)) throw DomainError("need --dt > 0 and --time >= 0");
  return static_cast<std::size_t>(std::llround(time / dt));
}

TodaState random_state(std::size_t n, double spread, double kappa, TodaBoundary bc,
                       std::uint64_t seed) {
  if (n == 0) throw DomainError("--n must be positive");
  RngStream rng(seed, 0);
  TodaState s;
  s.kappa = kappa;
  s.bc = bc;
  for (std::size_t j = 0; j < n; ++j) s.mu.push_back(rng.uniform(-spread, spread));
  for (std::size_t j = 0; j < n; ++j) s.p.push_back(rng.uniform(-spread, spread));
  return s;
}

nlohmann::json poly_coefficients(const RationalPoly& p) {
  nlohmann::json c = nlohmann::json::object();
  const auto& cs = p.coeffs();
  for (std::size_t k = 0; k < cs.size(); ++k) {
    if (!is_zero(cs[k])) c[std::to_string(k)] = to_string(cs[k]);
  }
  return c;
}

} // namespace

CommandResult cmd_toda(const TodaOptions& o, OutputSink& sink) {
  const TodaState s0 =
      random_state(o.c.n, o.spread, o.kappa, parse_toda_boundary(o.bc), o.c.seed);
  const std::size_t steps = step_count(o.time, o.dt);
  CommandResult res;
  TodaTrajectory traj;
  try {
    traj = toda_integrate(s0, o.dt, steps, o.sample_every);
  } catch (const TodaIntegrationError& e) {
    res.ok = false;
    res.summary = {{"error", e.what()}, {"time", e.time}, {"last_mu", e.last_valid.mu},
                   {"last_p", e.last_valid.p}};
    return res;
  }
  Table t{{"time", "j", "mu", "p", "energy"}, {}};
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const auto& s = traj.states[k];
    const double h = hamiltonian(s);
    for (std::size_t j = 0; j < s.size(); ++j) {
      t.add({traj.times[k], static_cast<std::int64_t>(j + 1), s.mu[j], s.p[j], h});
    }
  }
  sink.table("toda", t);

  const TodaState& fin = traj.states.back();
  const double h0 = hamiltonian(s0);
  nlohmann::json report{
      {"n", o.c.n},
      {"kappa", o.kappa},
      {"boundary", o.bc},
      {"dt", o.dt},
      {"steps", steps},
      {"energy_initial", h0},
      {"energy_final", hamiltonian(fin)},
      {"energy_drift", std::abs(hamiltonian(fin) - h0) / (h0 != 0.0 ? std::abs(h0) : 1.0)},
      {"momentum_drift", std::abs(total_momentum(fin) - total_momentum(s0))},
      {"time_reversal_error", time_reversal_error(s0, o.dt, steps)}};
  auto mono = nlohmann::json::array();
  for (double lambda : {-1.0, 0.0, 1.0}) {
    mono.push_back({{"lambda", lambda},
                    {"initial", monodromy_trace(s0, lambda)},
                    {"final", monodromy_trace(fin, lambda)}});
  }
  report["monodromy_trace"] = mono;
  sink.json("toda_report.json", report);
  res.summary = report;
  res.summary.erase("monodromy_trace");
  return res;
}

CommandResult cmd_lax(const LaxOptions& o, OutputSink& sink) {
  LaxConvention conv;
  if (o.convention == "flow") {
    conv = LaxConvention::flow;
  } else if (o.convention == "printed") {
    conv = LaxConvention::printed;
  } else {
    throw DomainError("unknown --convention '" + o.convention + "' (flow or printed)");
  }
  const TodaState s0 = random_state(o.c.n, o.spread, o.kappa, TodaBoundary::periodic, o.c.seed);
  const IsospectralityReport r =
      isospectrality_check(s0, {o.w, 0.0}, o.dt, step_count(o.time, o.dt), conv);
  Table t{{"k", "re_initial", "im_initial", "re_final", "im_final", "drift"}, {}};
  for (std::size_t k = 0; k < r.initial.size(); ++k) {
    t.add({static_cast<std::int64_t>(k + 1), r.initial[k].real(), r.initial[k].imag(),
           r.final[k].real(), r.final[k].imag(), std::abs(r.initial[k] - r.final[k])});
  }
  sink.table("lax", t);
  nlohmann::json report{{"convention", o.convention}, {"w", o.w},
                        {"max_drift", r.max_drift},   {"energy_drift", r.energy_drift},
                        {"curve_residual", r.curve_residual}};
  sink.json("lax_report.json", report);
  CommandResult res;
  res.summary = report;
  return res;
}

CommandResult cmd_tau(const TauOptions& o, OutputSink& sink) {
  const ExpPoly phi = parse_phi(o.phi);
  const auto taus = tau_from_phi(phi, o.jmax);
  Table t{{"j", "tau", "bilinear_zero"}, {}};
  bool all = true;
  for (int j = 0; j <= o.jmax; ++j) {
    std::int64_t zero = -1; // not checkable: tau_{j+1} missing
    if (j < o.jmax) {
      zero = bilinear_residual(taus, j).is_zero() ? 1 : 0;
      all = all && zero == 1;
    }
    t.add({static_cast<std::int64_t>(j), taus[static_cast<std::size_t>(j)].str(), zero});
  }
  sink.table("tau", t);
  CommandResult res;
  res.ok = all;
  res.summary = {{"phi", o.phi}, {"jmax", o.jmax}, {"bilinear_identity", all}};
  return res;
}

CommandResult cmd_yv(const YvOptions& o, OutputSink& sink) {
  const auto q = yablonskii(o.jmax);
  bool ok = true;
  if (sink.format() == Format::json) {
    auto arr = nlohmann::json::array();
    for (std::size_t j = 0; j < q.size(); ++j) {
      const bool integer = has_integer_coefficients(q[j]);
      ok = ok && integer && q[j].degree() == static_cast<long>(j * (j + 1) / 2);
      arr.push_back({{"j", j},
                     {"degree", q[j].degree()},
                     {"integer_coefficients", integer},
                     {"coefficients", poly_coefficients(q[j])}});
    }
    sink.json("yv.json", arr);
  } else {
    Table t{{"j", "power", "coefficient"}, {}};
    for (std::size_t j = 0; j < q.size(); ++j) {
      ok = ok && has_integer_coefficients(q[j]) &&
           q[j].degree() == static_cast<long>(j * (j + 1) / 2);
      const auto& cs = q[j].coeffs();
      for (std::size_t k = 0; k < cs.size(); ++k) {
        if (!is_zero(cs[k])) {
          t.add({static_cast<std::int64_t>(j), static_cast<std::int64_t>(k), to_string(cs[k])});
        }
      }
    }
    sink.table("yv", t);
  }
  CommandResult res;
  res.ok = ok;
  res.summary = {{"jmax", o.jmax}, {"integer_and_degree_ok", ok}};
  return res;
}

CommandResult cmd_pii(const PiiOptions& o, OutputSink& sink) {
  if (o.jmax < 2) throw DomainError("--jmax must be at least 2");
  const auto q = yablonskii(o.jmax);
  Table t{{"j", "residual_zero", "residual"}, {}};
  bool all = true;
  for (int j = 0; j <= o.jmax; ++j) {
    const RationalPoly r = painleve2_residual(q, j);
    all = all && r.is_zero();
    t.add({static_cast<std::int64_t>(j), static_cast<std::int64_t>(r.is_zero() ? 1 : 0), r.str()});
  }
  sink.table("pii", t);
  const SigmaGaugeReport sg = sigma_gauge_check(o.jmax);
  nlohmann::json report{{"jmax", o.jmax},
                        {"residuals_zero", all},
                        {"sigma_gauge_passed", sg.passed},
                        {"pq", sg.pq.str()},
                        {"pq_is_minus_z_over_4", sg.pq_is_minus_z_over_4}};
  sink.json("pii_report.json", report);
  CommandResult res;
  res.ok = all && sg.passed;
  res.summary = report;
  return res;
}

CommandResult cmd_algebra(const AlgebraOptions&, OutputSink& sink) {
  const LieReport r = lie_checks();
  Table t{{"check", "passed"}, {}};
  for (const auto& c : r.checks) t.add({c.name, static_cast<std::int64_t>(c.passed ? 1 : 0)});
  sink.table("algebra", t);
  nlohmann::json report{{"all_passed", r.all_passed()},
                        {"casimir", r.casimir.str()},
                        {"casimir_is_scalar", r.casimir_is_scalar},
                        {"casimir_scalar", to_string(r.casimir_scalar)}};
  sink.json("algebra_report.json", report);
  CommandResult res;
  res.ok = r.all_passed();
  res.summary = report;
  return res;
}

CommandResult cmd_anderson(const AndersonOptions& o, OutputSink& sink) {
  if (o.c.n == 0) throw DomainError("--n must be positive");
  const RngStream root(o.c.seed, 0);
  std::vector<AndersonReport> reps(o.c.trials);
  parallel_for(o.c.trials, o.c.threads, [&](std::size_t k) {
    RngStream rng = root.child(k);
    reps[k] = anderson_duality_check(random_potential(o.c.n, o.disorder, rng));
  });
  Table t{{"trial", "max_residual", "max_residual_double", "eigenvalue_min", "eigenvalue_max"}, {}};
  double worst = 0.0;
  for (std::size_t k = 0; k < reps.size(); ++k) {
    worst = std::max(worst, reps[k].max_residual);
    t.add({static_cast<std::int64_t>(k), reps[k].max_residual, reps[k].max_residual_double,
           reps[k].eigenvalues.front(),
           reps[k].eigenvalues.back()});
  }
  sink.table("anderson", t);
  CommandResult res;
  res.ok = worst < o.tolerance;
  res.summary = {{"n", o.c.n},
                 {"trials", o.c.trials},
                 {"disorder", o.disorder},
                 {"max_residual", worst},
                 {"tolerance", o.tolerance},
                 {"passed", res.ok}};
  return res;
}

} // namespace bdheap::cli
