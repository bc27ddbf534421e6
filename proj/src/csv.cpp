#include "metacoll/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "metacoll/error.hpp"

namespace metacoll {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(
        start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::domain: return "domain";
    case ErrorCode::convergence: return "convergence";
    case ErrorCode::resonance: return "resonance";
    case ErrorCode::io: return "io";
    case ErrorCode::parse: return "parse";
    case ErrorCode::config: return "config";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::coverage: return "coverage";
  }
  return "unknown";
}

CsvTable CsvTable::read(std::istream& in, const std::string& source) {
  CsvTable t;
  t.source_ = source;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto fields = split(trimmed);
    if (!have_header) {
      t.header_ = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header_.size()) {
      fail(ErrorCode::parse, source + ":" + std::to_string(lineno) +
                                 ": expected " +
                                 std::to_string(t.header_.size()) +
                                 " fields, got " +
                                 std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto& f = fields[c];
      double v = 0.0;
      auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        fail(ErrorCode::parse, source + ":" + std::to_string(lineno) +
                                   ": column '" + t.header_[c] +
                                   "': not a number: '" + f + "'");
      }
      row.push_back(v);
    }
    t.data_.push_back(std::move(row));
    t.lines_.push_back(lineno);
  }
  if (!have_header) fail(ErrorCode::parse, source + ": missing header row");
  return t;
}

CsvTable CsvTable::read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open " + path);
  return read(in, path);
}

std::optional<std::size_t> CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header_.size(); ++i)
    if (header_[i] == name) return i;
  return std::nullopt;
}

std::size_t CsvTable::require_column(const std::string& name) const {
  auto c = column(name);
  if (!c) fail(ErrorCode::parse, source_ + ": missing column '" + name + "'");
  return *c;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace metacoll
