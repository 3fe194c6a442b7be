#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace bdheap::cli {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

/// Shortest round-trip decimal, '.' separator regardless of locale.
std::string format_double(double x);

std::string to_csv(const Table& t);
nlohmann::json to_json(const Table& t); // array of row objects

enum class Format { csv, json };

/// Where a command writes its outputs. Every file goes through here so the
/// manifest lists exactly what was produced, in production order.
class OutputSink {
public:
  OutputSink(std::filesystem::path dir, Format format);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  Format format() const noexcept { return format_; }
  const std::vector<std::string>& files() const noexcept { return files_; }

  /// Writes `stem`.csv or `stem`.json according to the format.
  void table(const std::string& stem, const Table& t);
  void json(const std::string& name, const nlohmann::json& j);
  void text(const std::string& name, const std::string& content);

private:
  std::filesystem::path dir_;
  Format format_;
  std::vector<std::string> files_;
};

} // namespace bdheap::cli
