#include "bdheap_tools/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include <bdheap/errors.hpp>
#include <bdheap/parallel.hpp>

#include "bdheap_tools/commands.hpp"
#include "bdheap_tools/manifest.hpp"
#include "bdheap_tools/output.hpp"

namespace bdheap::cli {
namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Appends `--key value` for every config entry whose flag is not already on
// the command line, so explicit flags always win.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config") {
      if (k + 1 >= args.size()) throw UsageError("--config needs a file");
      path = args[k + 1];
    } else if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
    }
  }
  if (path.empty()) return args;
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  std::vector<std::string> extra;
  while (std::getline(f, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    if (key.empty() || key == "config") {
      throw UsageError(path + ":" + std::to_string(lineno) + ": bad key");
    }
    if (!has_flag(args, "--" + key)) {
      extra.push_back("--" + key);
      extra.push_back(value);
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

struct Shared {
  std::string out = "out";
  std::string format = "csv";
  std::string config;
};

void add_common(CLI::App* sub, Common& c, Shared& sh, bool with_n, bool with_t,
                bool with_trials) {
  if (with_n) sub->add_option("--n", c.n, "system size (columns, generators or particles)");
  if (with_t) sub->add_option("--t", c.t, "number of events / word length");
  if (with_trials) sub->add_option("--trials", c.trials, "independent runs");
  sub->add_option("--seed", c.seed, "master seed");
  sub->add_option("--threads", c.threads, "worker threads (results do not depend on it)")
      ->check(CLI::Range(1u, 1024u));
  sub->add_option("--out", sh.out, "output directory");
  sub->add_option("--format", sh.format, "table format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--config", sh.config, "key = value file; flags override it");
}

std::map<std::string, std::string> collect_parameters(const CLI::App* sub) {
  std::map<std::string, std::string> p;
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "out" || name == "config" || name == "seed") continue;
    std::string v = opt->count() > 0 ? opt->results().back() : opt->get_default_str();
    p[name] = v;
  }
  return p;
}

} // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  try {
    args = merge_config(raw_args);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  CLI::App app{"bdheap: ballistic deposition, heaps of pieces and integrable structures"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  Shared sh;

  DepositOptions dep;
  CollapseOptions col;
  GammaOptions gam;
  LyapunovOptions lya;
  WordsOptions wor;
  TodaOptions tod;
  LaxOptions lax;
  TauOptions tau;
  YvOptions yv;
  PiiOptions pii;
  AlgebraOptions alg;
  AndersonOptions and_;
  std::string manifest_path;

  std::map<std::string, std::function<CommandResult(OutputSink&)>> dispatch;

  {
    auto* s = app.add_subcommand("deposit", "simulate NNN ballistic deposition");
    add_common(s, dep.c, sh, true, true, true);
    s->add_option("--bc", dep.bc, "free or periodic");
    s->add_option("--stride", dep.stride, "sampling stride in events (0: t/100)");
    s->add_option("--beta", dep.beta, "also run the soft rule at this inverse temperature");
    s->add_option("--sample-stride", dep.sample_stride, "column stride for the moment report");
    dispatch["deposit"] = [&](OutputSink& k) { return cmd_deposit(dep, k); };
  }
  {
    auto* s = app.add_subcommand("collapse", "width scaling collapse over several sizes");
    add_common(s, col.c, sh, false, false, true);
    s->add_option("--sizes", col.sizes, "comma-separated system sizes");
    s->add_option("--umin", col.umin, "smallest u = tau / N^{3/2}");
    s->add_option("--umax", col.umax, "largest u");
    s->add_option("--points", col.points, "log-spaced checkpoints per size");
    s->add_option("--bc", col.bc, "free or periodic");
    s->add_option("--width", col.width, "centered or ensemble");
    s->add_option("--usat", col.usat, "u above which widths count as saturated");
    s->add_option("--growth-umin", col.growth_umin, "growth fit window start (u)");
    s->add_option("--growth-umax", col.growth_umax, "growth fit window end (u)");
    dispatch["collapse"] = [&](OutputSink& k) { return cmd_collapse(col, k); };
  }
  {
    auto* s = app.add_subcommand("gamma", "ratio of heap height to radial coordinate");
    add_common(s, gam.c, sh, true, true, true);
    s->add_option("--r0", gam.r0, "block measure stretch scale");
    s->add_option("--x0", gam.x0, "block measure shear scale");
    s->add_option("--mode", gam.mode, "coupled or independent");
    s->add_option("--radial", gam.radial, "singular or eigen");
    s->add_option("--checkpoints", gam.checkpoints, "number of checkpoints up to --t");
    dispatch["gamma"] = [&](OutputSink& k) { return cmd_gamma(gam, k); };
  }
  {
    auto* s = app.add_subcommand("lyapunov", "Lyapunov exponent of the Gamma_2 walk");
    add_common(s, lya.c, sh, false, false, true);
    s->add_option("--steps", lya.steps, "walk length per trial");
    s->add_option("--method", lya.method, "montecarlo, measure or both");
    s->add_option("--bins", lya.bins, "histogram bins on [0, pi/3)");
    s->add_option("--p", lya.p, "probability of the +1 step");
    s->add_option("--burn-in", lya.burn_in, "discarded fraction of each walk");
    dispatch["lyapunov"] = [&](OutputSink& k) { return cmd_lyapunov(lya, k); };
  }
  {
    auto* s = app.add_subcommand("words", "normal form, heap and reduction of a word");
    add_common(s, wor.c, sh, true, true, false);
    s->add_option("--word", wor.word, "signed letters, e.g. \"3 6 1 -2\"; random if empty");
    dispatch["words"] = [&](OutputSink& k) { return cmd_words(wor, k); };
  }
  {
    auto* s = app.add_subcommand("toda", "integrate the Toda chain");
    add_common(s, tod.c, sh, true, false, false);
    s->add_option("--time", tod.time, "total time");
    s->add_option("--dt", tod.dt, "step size");
    s->add_option("--kappa", tod.kappa, "coupling");
    s->add_option("--bc", tod.bc, "open or periodic");
    s->add_option("--sample-every", tod.sample_every, "steps between trajectory samples");
    s->add_option("--spread", tod.spread, "initial data drawn from [-spread, spread]");
    dispatch["toda"] = [&](OutputSink& k) { return cmd_toda(tod, k); };
  }
  {
    auto* s = app.add_subcommand("lax", "Lax spectrum drift along a Toda trajectory");
    add_common(s, lax.c, sh, true, false, false);
    s->add_option("--time", lax.time, "total time");
    s->add_option("--dt", lax.dt, "step size");
    s->add_option("--kappa", lax.kappa, "coupling");
    s->add_option("--w", lax.w, "spectral parameter");
    s->add_option("--convention", lax.convention, "flow or printed");
    s->add_option("--spread", lax.spread, "initial data drawn from [-spread, spread]");
    dispatch["lax"] = [&](OutputSink& k) { return cmd_lax(lax, k); };
  }
  {
    auto* s = app.add_subcommand("tau", "Hankel tau functions and the bilinear identity");
    add_common(s, tau.c, sh, false, false, false);
    s->add_option("--phi", tau.phi, "exp:c@a,... or poly:c0,c1,...");
    s->add_option("--jmax", tau.jmax, "largest j");
    dispatch["tau"] = [&](OutputSink& k) { return cmd_tau(tau, k); };
  }
  {
    auto* s = app.add_subcommand("yv", "Yablonskii-Vorob'ev polynomials");
    add_common(s, yv.c, sh, false, false, false);
    s->add_option("--jmax", yv.jmax, "largest j");
    dispatch["yv"] = [&](OutputSink& k) { return cmd_yv(yv, k); };
  }
  {
    auto* s = app.add_subcommand("pii", "Painleve II residuals and the sigma gauge check");
    add_common(s, pii.c, sh, false, false, false);
    s->add_option("--jmax", pii.jmax, "largest j");
    dispatch["pii"] = [&](OutputSink& k) { return cmd_pii(pii, k); };
  }
  {
    auto* s = app.add_subcommand("algebra", "exact sl2 / sl3 commutation checks");
    add_common(s, alg.c, sh, false, false, false);
    dispatch["algebra"] = [&](OutputSink& k) { return cmd_algebra(alg, k); };
  }
  {
    auto* s = app.add_subcommand("anderson", "Anderson transfer-matrix duality check");
    add_common(s, and_.c, sh, true, false, true);
    s->add_option("--disorder", and_.disorder, "potential drawn from [-W/2, W/2]");
    s->add_option("--tolerance", and_.tolerance, "pass threshold for the residual");
    dispatch["anderson"] = [&](OutputSink& k) { return cmd_anderson(and_, k); };
  }
  auto* ver = app.add_subcommand("verify", "re-execute a run manifest and compare digests");
  ver->add_option("manifest", manifest_path, "path to manifest.json")->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();

  if (name == "verify") {
    try {
      const VerifyReport rep = verify_manifest(manifest_path, [](const std::vector<std::string>& a) {
        std::ostringstream o;
        std::ostringstream e;
        return run(a, o, e);
      });
      for (const auto& m : rep.messages) (rep.passed ? out : err) << m << '\n';
      out << "verify: " << (rep.passed ? "PASS" : "FAIL") << '\n';
      return rep.passed ? kOk : kFailure;
    } catch (const std::exception& e) {
      err << "verify: FAIL: " << e.what() << '\n';
      return kFailure;
    }
  }

  const Format fmt = sh.format == "json" ? Format::json : Format::csv;
  std::optional<OutputSink> sink;
  try {
    sink.emplace(fs::path(sh.out), fmt);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }

  CommandResult result;
  try {
    result = dispatch.at(name)(*sink);
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    nlohmann::json diag{{"command", name}, {"error", e.what()}};
    std::ofstream(fs::path(sh.out) / "error.json") << diag.dump(2) << '\n';
    err << diag.dump() << '\n';
    return kFailure;
  }
  if (!result.ok) sink->json("diagnostic.json", result.summary);

  Manifest m;
  m.command = name;
  m.parameters = collect_parameters(sub);
  const CLI::Option* seed_opt = sub->get_option("--seed");
  m.seed = seed_opt->as<std::uint64_t>();
  m.version = BDHEAP_VERSION;
  m.timestamp = utc_timestamp();
  for (const auto& f : sink->files()) m.outputs.emplace_back(f, sha256_hex_file(sink->dir() / f));
  write_manifest(sink->dir() / kManifestName, m);

  out << name << ": " << result.summary.dump() << '\n';
  if (!result.ok) {
    err << name << ": check failed, see " << (sink->dir() / "diagnostic.json").string() << '\n';
    return kFailure;
  }
  return kOk;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, out, err);
}

} // namespace bdheap::cli
