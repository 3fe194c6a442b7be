#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace bdheap::cli {

inline constexpr const char* kManifestName = "manifest.json";

struct Manifest {
  std::string command;
  std::map<std::string, std::string> parameters; // long flag name -> value; excludes seed/out/config
  std::uint64_t seed = 0;
  std::string version;
  std::string timestamp; // UTC, informational only
  std::vector<std::pair<std::string, std::string>> outputs; // file name, SHA-256 hex
};

std::string sha256_hex(std::string_view data);
std::string sha256_hex_file(const std::filesystem::path& path);

nlohmann::json to_json(const Manifest& m);
/// Throws std::runtime_error on a malformed document.
Manifest manifest_from_json(const nlohmann::json& j);
Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const Manifest& m);

std::string utc_timestamp();

/// Arguments that reproduce the run with outputs sent to `out_dir`.
std::vector<std::string> replay_args(const Manifest& m, const std::filesystem::path& out_dir);

struct VerifyReport {
  bool passed = false;
  std::vector<std::string> missing;
  std::vector<std::string> corrupted;  // on-disk digest differs from the manifest
  std::vector<std::string> mismatched; // re-execution digest differs from the manifest
  std::vector<std::string> messages;
};

/// Checks the recorded outputs next to the manifest, then re-executes the
/// command through `rerun` (which returns an exit code) in a scratch
/// directory and compares digests.
VerifyReport verify_manifest(const std::filesystem::path& manifest_path,
                             const std::function<int(const std::vector<std::string>&)>& rerun);

} // namespace bdheap::cli
