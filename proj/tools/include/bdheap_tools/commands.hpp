#pragma once

// Subcommand bodies. Each one only wires options into library calls and
// turns the results into tables and reports.

#include <cstddef>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "bdheap_tools/output.hpp"

namespace bdheap::cli {

struct Common {
  std::size_t n = 0;
  std::size_t t = 0;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

/// `ok == false` maps to exit code 1 with `summary` written as the diagnostic.
struct CommandResult {
  nlohmann::json summary = nlohmann::json::object();
  bool ok = true;
};

struct DepositOptions {
  Common c{64, 10000, 1};
  std::string bc = "free";
  std::size_t stride = 0;        // trajectory / checkpoint spacing; 0 picks t/100
  double beta = 0.0;             // > 0 also runs the soft rule on the same drops
  std::size_t sample_stride = 1; // ensemble mode: columns kept for the moment report
};
CommandResult cmd_deposit(const DepositOptions& o, OutputSink& sink);

struct CollapseOptions {
  Common c{0, 0, 100};
  std::string sizes = "16,32,64,128";
  double umin = 0.01;
  double umax = 10.0;
  std::size_t points = 40;
  std::string bc = "free";
  std::string width = "centered";
  double usat = 3.0;
  double growth_umin = 0.002;
  double growth_umax = 0.1;
};
CommandResult cmd_collapse(const CollapseOptions& o, OutputSink& sink);

struct GammaOptions {
  Common c{10, 10000, 32};
  double r0 = 1.0;
  double x0 = 1.0;
  std::string mode = "coupled";
  std::string radial = "singular";
  std::size_t checkpoints = 10;
};
CommandResult cmd_gamma(const GammaOptions& o, OutputSink& sink);

struct LyapunovOptions {
  Common c{0, 0, 4};
  std::size_t steps = 1000000;
  std::string method = "both";
  std::size_t bins = 1024;
  double p = 0.5;
  double burn_in = 0.1;
};
CommandResult cmd_lyapunov(const LyapunovOptions& o, OutputSink& sink);

struct WordsOptions {
  Common c{6, 13, 1};
  std::string word; // empty: random positive word of length t on n generators
};
CommandResult cmd_words(const WordsOptions& o, OutputSink& sink);

struct TodaOptions {
  Common c{4, 0, 1};
  double time = 10.0;
  double dt = 1e-3;
  double kappa = 1.0;
  std::string bc = "periodic";
  std::size_t sample_every = 100;
  double spread = 0.5; // initial data uniform in [-spread, spread]
};
CommandResult cmd_toda(const TodaOptions& o, OutputSink& sink);

struct LaxOptions {
  Common c{4, 0, 1};
  double time = 10.0;
  double dt = 1e-3;
  double kappa = 1.0;
  double w = 1.0;
  std::string convention = "flow";
  double spread = 0.5;
};
CommandResult cmd_lax(const LaxOptions& o, OutputSink& sink);

struct TauOptions {
  Common c{};
  std::string phi = "exp:1@1,1@-1";
  int jmax = 4;
};
CommandResult cmd_tau(const TauOptions& o, OutputSink& sink);

struct YvOptions {
  Common c{};
  int jmax = 10;
};
CommandResult cmd_yv(const YvOptions& o, OutputSink& sink);

struct PiiOptions {
  Common c{};
  int jmax = 10;
};
CommandResult cmd_pii(const PiiOptions& o, OutputSink& sink);

struct AlgebraOptions {
  Common c{};
};
CommandResult cmd_algebra(const AlgebraOptions& o, OutputSink& sink);

struct AndersonOptions {
  Common c{50, 0, 100};
  double disorder = 2.0;
  double tolerance = 1e-8;
};
CommandResult cmd_anderson(const AndersonOptions& o, OutputSink& sink);

} // namespace bdheap::cli
