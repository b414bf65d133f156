// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "bhw/errors.hpp"

namespace bhw::io {

inline constexpr int kSchemaVersion = 1;

#ifndef BHW_VERSION
#define BHW_VERSION "0.1.0"
#endif
inline constexpr const char* kVersion = BHW_VERSION;

using Cell = std::variant<std::int64_t, double, std::string>;

struct Column {
  std::string name;
  std::string unit;  // "1" for dimensionless quantities
};

/// Rectangular table with a unit on every column.
class ResultTable {
 public:
  ResultTable(std::string name, std::vector<Column> columns) : name_(std::move(name)), columns_(std::move(columns)) {
    for (const auto& c : columns_)
      if (c.unit.empty()) fail(ErrorKind::Structural, "column '" + c.name + "' of table '" + name_ + "' has no unit");
  }

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) {
      fail(ErrorKind::Structural, "table '" + name_ + "' expects " + std::to_string(columns_.size()) + " cells, got " +
                                      std::to_string(row.size()));
    }
    rows_.push_back(std::move(row));
  }

  const std::string& name() const { return name_; }
  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  std::size_t column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
      if (columns_[i].name == name) return i;
    fail(ErrorKind::Structural, "table '" + name_ + "' has no column '" + name + "'");
  }
  double number(std::size_t row, const std::string& column) const {
    const auto& c = rows_.at(row)[column_index(column)];
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
    fail(ErrorKind::Structural, "cell is not numeric");
  }

 private:
  std::string name_;
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// Everything one command emits: metadata, the config echo and its tables.
struct Document {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> config;
  std::deque<ResultTable> tables;  // deque: references from add_table stay valid
  /// Nested data that does not fit a table (JSON only; summarised in CSV comments).
  nlohmann::json report = nlohmann::json::object();
  std::optional<double> wall_seconds;

  ResultTable& add_table(std::string name, std::vector<Column> columns) {
    tables.emplace_back(std::move(name), std::move(columns));
    return tables.back();
  }
  const ResultTable& table(const std::string& name) const {
    for (const auto& t : tables)
      if (t.name() == name) return t;
    fail(ErrorKind::Structural, "no table named '" + name + "'");
  }
};

enum class Format { Csv, Json };

inline Format format_from_name(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  fail(ErrorKind::Config, "unknown output format '" + name + "' (expected csv or json)");
}

/// Shortest text that round-trips; fixed so outputs are byte-stable.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

namespace detail {
inline std::string csv_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

inline nlohmann::json json_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (std::isfinite(*d)) return *d;
    return format_double(*d);  // JSON has no inf/nan literals
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}
}  // namespace detail

/// CSV with '#' metadata lines. Several tables are written as consecutive
/// blocks, each introduced by "# table: <name>" and a "# units:" line.
inline std::string to_csv(const Document& doc) {
  std::ostringstream os;
  os << "# schema_version = " << kSchemaVersion << '\n';
  os << "# tool = bhw " << kVersion << '\n';
  os << "# command = " << doc.command << '\n';
  os << "# seed = " << doc.seed << '\n';
  for (const auto& [k, v] : doc.config) os << "# config." << k << " = " << v << '\n';
  if (doc.wall_seconds) os << "# wall_seconds = " << format_double(*doc.wall_seconds) << '\n';
  if (!doc.report.empty()) os << "# report = " << doc.report.dump() << '\n';
  bool first = true;
  for (const auto& t : doc.tables) {
    if (!first) os << '\n';
    first = false;
    os << "# table: " << t.name() << '\n';
    os << "# units: ";
    for (std::size_t i = 0; i < t.columns().size(); ++i) os << (i ? "," : "") << t.columns()[i].unit;
    os << '\n';
    for (std::size_t i = 0; i < t.columns().size(); ++i) os << (i ? "," : "") << t.columns()[i].name;
    os << '\n';
    for (const auto& row : t.rows()) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << detail::csv_cell(row[i]);
      os << '\n';
    }
  }
  return os.str();
}

inline nlohmann::json to_json_value(const Document& doc) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["tool"] = std::string("bhw ") + kVersion;
  j["command"] = doc.command;
  j["seed"] = doc.seed;
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& [k, v] : doc.config) cfg[k] = v;
  j["config"] = cfg;
  if (doc.wall_seconds) j["wall_seconds"] = *doc.wall_seconds;
  nlohmann::json tables = nlohmann::json::array();
  for (const auto& t : doc.tables) {
    nlohmann::json jt;
    jt["name"] = t.name();
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& c : t.columns()) cols.push_back({{"name", c.name}, {"unit", c.unit}});
    jt["columns"] = cols;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows()) {
      nlohmann::json r = nlohmann::json::array();
      for (const auto& c : row) r.push_back(detail::json_cell(c));
      rows.push_back(std::move(r));
    }
    jt["rows"] = std::move(rows);
    tables.push_back(std::move(jt));
  }
  j["tables"] = std::move(tables);
  j["report"] = doc.report;
  return j;
}

inline std::string to_json(const Document& doc) { return to_json_value(doc).dump(2) + "\n"; }

inline std::string render(const Document& doc, Format f) { return f == Format::Csv ? to_csv(doc) : to_json(doc); }

/// Writes to `path`, or to stdout when the path is "-".
inline void write_document(const Document& doc, const std::filesystem::path& path, Format f) {
  const std::string text = render(doc, f);
  if (path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::Config, "cannot open output file " + path.string());
  os << text;
  if (!os) fail(ErrorKind::Config, "failed writing " + path.string());
}

}  // namespace bhw::io
