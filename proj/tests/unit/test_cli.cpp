#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bdheap_tools/cli.hpp"
#include "bdheap_tools/manifest.hpp"

namespace fs = std::filesystem;
using bdheap::cli::run;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream o, e;
  const int code = run(args, o, e);
  return {code, o.str(), e.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("bdheap_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("yablonskii polynomials as json") {
  const auto dir = scratch("yv");
  const auto r = invoke({"yv", "--jmax", "4", "--format", "json", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "yv.json"));
  REQUIRE(j.size() == 5);
  CHECK(j[2]["coefficients"] == nlohmann::json{{"0", "4"}, {"3", "1"}});
  CHECK(j[3]["degree"] == 6);
  CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("same seed gives byte identical tables") {
  const auto a = scratch("dep_a");
  const auto b = scratch("dep_b");
  const auto c = scratch("dep_c");
  REQUIRE(invoke({"deposit", "--n", "32", "--t", "5000", "--seed", "9", "--out", a.string()}).code == 0);
  REQUIRE(invoke({"deposit", "--n", "32", "--t", "5000", "--seed", "9", "--threads", "3", "--out",
                  b.string()}).code == 0);
  REQUIRE(invoke({"deposit", "--n", "32", "--t", "5000", "--seed", "10", "--out", c.string()}).code == 0);
  CHECK(slurp(a / "deposit.csv") == slurp(b / "deposit.csv"));
  CHECK(slurp(a / "deposit.csv") != slurp(c / "deposit.csv"));
}

TEST_CASE("usage errors exit with code two") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"nonsense"}).code == 2);
  CHECK(invoke({"deposit", "--bogus", "1"}).code == 2);
  CHECK(invoke({"deposit", "--n", "abc"}).code == 2);
  CHECK(invoke({"deposit", "--bc", "sideways", "--out", scratch("bc").string()}).code == 2);
  CHECK(invoke({"tau", "--phi", "sin:1", "--out", scratch("phi").string()}).code == 2);
  CHECK(invoke({"yv", "--format", "xml"}).code == 2);
  CHECK(invoke({"words", "--config", "/nonexistent/cfg"}).code == 2);
}

TEST_CASE("flags override the config file") {
  const auto dir = scratch("cfg");
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "# test config\njmax = 3\nformat = json\n";
  }
  const auto out1 = dir / "one";
  REQUIRE(invoke({"yv", "--config", (dir / "run.cfg").string(), "--out", out1.string()}).code == 0);
  CHECK(nlohmann::json::parse(slurp(out1 / "yv.json")).size() == 4);

  const auto out2 = dir / "two";
  REQUIRE(invoke({"yv", "--config", (dir / "run.cfg").string(), "--jmax", "5", "--out",
                  out2.string()}).code == 0);
  CHECK(nlohmann::json::parse(slurp(out2 / "yv.json")).size() == 6);
}

TEST_CASE("exact commands report success") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"algebra"}, {"pii", "--jmax", "6"}, {"tau"}, {"words"},
        {"anderson", "--trials", "5"}, {"toda", "--time", "1"}, {"lax", "--time", "1"}}) {
    const auto dir = scratch("ok_" + args.front());
    auto full = args;
    full.insert(full.end(), {"--out", dir.string()});
    const auto r = invoke(full);
    INFO(args.front() << ": " << r.err);
    CHECK(r.code == 0);
    CHECK(r.out.rfind(args.front() + ": ", 0) == 0);
  }
}

TEST_CASE("verify passes on untouched outputs") {
  const auto dir = scratch("verify_ok");
  REQUIRE(invoke({"deposit", "--n", "16", "--t", "2000", "--seed", "3", "--out", dir.string()}).code == 0);
  const auto r = invoke({"verify", (dir / "manifest.json").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("verify: PASS") != std::string::npos);
}

TEST_CASE("verify names a corrupted file") {
  const auto dir = scratch("verify_corrupt");
  REQUIRE(invoke({"deposit", "--n", "16", "--t", "2000", "--out", dir.string()}).code == 0);
  {
    std::ofstream f(dir / "deposit.csv", std::ios::app);
    f << "tampered\n";
  }
  const auto r = invoke({"verify", (dir / "manifest.json").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("deposit.csv") != std::string::npos);
}

TEST_CASE("verify reports a missing file") {
  const auto dir = scratch("verify_missing");
  REQUIRE(invoke({"words", "--out", dir.string()}).code == 0);
  fs::remove(dir / "words.csv");
  const auto r = invoke({"verify", (dir / "manifest.json").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("words.csv") != std::string::npos);
}

TEST_CASE("verify detects a changed seed") {
  const auto dir = scratch("verify_seed");
  REQUIRE(invoke({"deposit", "--n", "16", "--t", "2000", "--seed", "3", "--out", dir.string()}).code == 0);
  auto m = bdheap::cli::read_manifest(dir / "manifest.json");
  m.seed = 4;
  bdheap::cli::write_manifest(dir / "manifest.json", m);
  const auto r = invoke({"verify", (dir / "manifest.json").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("digest mismatch") != std::string::npos);
}

TEST_CASE("sha256 digest") {
  CHECK(bdheap::cli::sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
