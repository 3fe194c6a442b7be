#include "bdheap_tools/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bdheap::cli {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

nlohmann::json cell_json(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return nullptr;
    return *d;
  }
  return std::get<std::string>(c);
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << content;
  if (!f) throw std::runtime_error("write failed for " + p.string());
}

} // namespace

std::string to_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t k = 0; k < t.columns.size(); ++k) os << (k ? "," : "") << t.columns[k];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << cell_text(row[k]);
    os << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const Table& t) {
  auto arr = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t k = 0; k < row.size() && k < t.columns.size(); ++k) {
      obj[t.columns[k]] = cell_json(row[k]);
    }
    arr.push_back(std::move(obj));
  }
  return arr;
}

OutputSink::OutputSink(std::filesystem::path dir, Format format)
    : dir_(std::move(dir)), format_(format) {
  std::filesystem::create_directories(dir_);
}

void OutputSink::table(const std::string& stem, const Table& t) {
  if (format_ == Format::csv) {
    text(stem + ".csv", to_csv(t));
  } else {
    json(stem + ".json", to_json(t));
  }
}

void OutputSink::json(const std::string& name, const nlohmann::json& j) {
  text(name, j.dump(2) + "\n");
}

void OutputSink::text(const std::string& name, const std::string& content) {
  write_file(dir_ / name, content);
  files_.push_back(name);
}

} // namespace bdheap::cli
