#include "bdheap_tools/manifest.hpp"

#include <array>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace bdheap::cli {
namespace fs = std::filesystem;

namespace {

std::string hex(const unsigned char* p, unsigned n) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s;
  s.reserve(2 * n);
  for (unsigned k = 0; k < n; ++k) {
    s += digits[p[k] >> 4];
    s += digits[p[k] & 15];
  }
  return s;
}

class Sha256 {
public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("sha256: OpenSSL initialisation failed");
    }
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx_, data, n) != 1) throw std::runtime_error("sha256: update failed");
  }
  std::string finish() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned len = 0;
    if (EVP_DigestFinal_ex(ctx_, md.data(), &len) != 1) {
      throw std::runtime_error("sha256: final failed");
    }
    return hex(md.data(), len);
  }

private:
  EVP_MD_CTX* ctx_;
};

} // namespace

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data.data(), data.size());
  return h.finish();
}

std::string sha256_hex_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  Sha256 h;
  std::array<char, 1 << 16> buf{};
  while (f) {
    f.read(buf.data(), buf.size());
    h.update(buf.data(), static_cast<std::size_t>(f.gcount()));
  }
  return h.finish();
}

nlohmann::json to_json(const Manifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  j["parameters"] = m.parameters;
  j["seed"] = m.seed;
  j["version"] = m.version;
  j["timestamp"] = m.timestamp;
  auto outs = nlohmann::json::array();
  for (const auto& [file, digest] : m.outputs) outs.push_back({{"file", file}, {"sha256", digest}});
  j["outputs"] = outs;
  return j;
}

Manifest manifest_from_json(const nlohmann::json& j) {
  try {
    Manifest m;
    m.command = j.at("command").get<std::string>();
    m.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.version = j.value("version", "");
    m.timestamp = j.value("timestamp", "");
    for (const auto& o : j.at("outputs")) {
      m.outputs.emplace_back(o.at("file").get<std::string>(), o.at("sha256").get<std::string>());
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed manifest: ") + e.what());
  }
}

Manifest read_manifest(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read manifest " + path.string());
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("manifest " + path.string() + " is not valid JSON: " + e.what());
  }
  return manifest_from_json(j);
}

void write_manifest(const fs::path& path, const Manifest& m) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write manifest " + path.string());
  f << to_json(m).dump(2) << '\n';
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::vector<std::string> replay_args(const Manifest& m, const fs::path& out_dir) {
  std::vector<std::string> args{m.command};
  for (const auto& [k, v] : m.parameters) {
    args.push_back("--" + k);
    args.push_back(v);
  }
  args.push_back("--seed");
  args.push_back(std::to_string(m.seed));
  args.push_back("--out");
  args.push_back(out_dir.string());
  return args;
}

VerifyReport verify_manifest(const fs::path& manifest_path,
                             const std::function<int(const std::vector<std::string>&)>& rerun) {
  VerifyReport rep;
  if (!fs::exists(manifest_path)) {
    rep.missing.push_back(manifest_path.string());
    rep.messages.push_back("missing manifest: " + manifest_path.string());
    return rep;
  }
  const Manifest m = read_manifest(manifest_path);
  const fs::path dir = manifest_path.parent_path();

  for (const auto& [file, digest] : m.outputs) {
    const fs::path p = dir / file;
    if (!fs::exists(p)) {
      rep.missing.push_back(file);
      rep.messages.push_back("missing file: " + file);
    } else if (sha256_hex_file(p) != digest) {
      rep.corrupted.push_back(file);
      rep.messages.push_back("corrupted file: " + file + " (digest differs from manifest)");
    }
  }
  if (!rep.missing.empty() || !rep.corrupted.empty()) return rep;

  std::random_device rd;
  const fs::path scratch =
      fs::temp_directory_path() / ("bdheap-verify-" + std::to_string(rd()) + std::to_string(rd()));
  fs::create_directories(scratch);
  const int code = rerun(replay_args(m, scratch));
  if (code != 0) {
    rep.messages.push_back("re-execution exited with code " + std::to_string(code));
  }
  for (const auto& [file, digest] : m.outputs) {
    const fs::path p = scratch / file;
    if (!fs::exists(p)) {
      rep.mismatched.push_back(file);
      rep.messages.push_back("digest mismatch: " + file + " was not reproduced");
    } else if (sha256_hex_file(p) != digest) {
      rep.mismatched.push_back(file);
      rep.messages.push_back("digest mismatch: " + file);
    }
  }
  std::error_code ec;
  fs::remove_all(scratch, ec);
  rep.passed = code == 0 && rep.mismatched.empty();
  return rep;
}

} // namespace bdheap::cli
