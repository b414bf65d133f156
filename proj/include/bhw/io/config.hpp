// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "bhw/errors.hpp"

namespace bhw::io {

enum class ValueType { Int, Real, Bool, String, IntList, RealList };

/// One accepted configuration key. Keys outside the schema are rejected.
struct KeySpec {
  std::string_view name;
  ValueType type;
  std::string_view default_value;
  std::string_view unit;
  std::string_view help;
};

// clang-format off
inline const std::vector<KeySpec>& config_schema() {
  static const std::vector<KeySpec> schema = {
      // Model
      {"L", ValueType::Int, "6", "", "ring sites"},
      {"N", ValueType::Int, "-1", "", "total particle number; -1 selects L/2"},
      {"t", ValueType::Real, "1", "GHz", "ring hopping"},
      {"s", ValueType::Real, "1", "GHz", "ring-to-center hopping"},
      {"n0", ValueType::Int, "-1", "", "k0 grid index; -1 derives it from k0_over_pi"},
      {"k0_over_pi", ValueType::Real, "1", "", "k0 in units of pi when n0 = -1"},
      {"s_prime", ValueType::Real, "0.01", "GHz", "control-to-center hopping"},
      {"mu_c", ValueType::Real, "12", "GHz", "control detuning"},
      {"units", ValueType::String, "angular", "", "temperature convention: angular (hbar), frequency (h) or custom"},
      {"mk_per_ghz", ValueType::Real, "0", "mK/GHz", "custom conversion constant, used when units = custom"},
      {"seed", ValueType::Int, "1", "", "master seed"},
      // Sweep axes
      {"s_values", ValueType::RealList, "1:10:0.25", "GHz", "s sweep"},
      {"mu_c_values", ValueType::RealList, "12", "GHz", "mu_c sweep"},
      {"T_values", ValueType::RealList, "10,15,20,50", "mK", "temperature sweep"},
      {"L_values", ValueType::IntList, "6,8,10", "", "ring-size sweep"},
      {"N_values", ValueType::IntList, "1,2,3,4", "", "filling sweep (oracle-check)"},
      {"s_prime_values", ValueType::RealList, "0,0.01,1", "GHz", "s' sweep (oracle-check)"},
      {"sigma_values", ValueType::RealList, "0.005,0.01,0.02,0.04,0.08", "GHz", "disorder strength sweep"},
      {"delta_a_values", ValueType::RealList, "0.5,1,2,5,10,20", "nm", "placement spread sweep"},
      {"a_values", ValueType::RealList, "", "nm", "separations for r(a) curves; empty skips them"},
      // Thermal and readout
      {"T", ValueType::Real, "15", "mK", "temperature for single-point commands"},
      {"M", ValueType::Int, "1000", "", "shots per ensemble member"},
      {"K", ValueType::Int, "1000", "", "ensemble members or disorder realizations"},
      {"strategy", ValueType::String, "classes", "", "Slater sum strategy: classes or determinants"},
      {"calibrate", ValueType::Bool, "true", "", "add the mu_c calibration table to fidelity-dist"},
      // Disorder
      {"sigma", ValueType::Real, "0.4", "GHz", "strength of the displayed single realization"},
      {"realization", ValueType::Int, "0", "", "index of the displayed realization"},
      {"noise_L_values", ValueType::IntList, "", "", "ring sizes for the many-body noise study; empty skips it"},
      {"noise_sigma", ValueType::Real, "0.02", "GHz", "disorder strength of the many-body noise study"},
      {"noise_K", ValueType::Int, "1000", "", "realizations per ring size in the noise study"},
      {"noise_antithetic", ValueType::Bool, "true", "", "pair every draw with its negation"},
      {"filling", ValueType::Real, "0.5", "", "filling fraction of the noise study"},
      // Coupling toy model
      {"omega_ghz", ValueType::Real, "5", "GHz", "oscillator frequency omega / 2 pi"},
      {"mass_kg", ValueType::Real, "9.1093837015e-31", "kg", "oscillator mass"},
      {"s_display", ValueType::Real, "0.4", "GHz", "coupling used for the broadening column"},
      {"quadrature_nodes", ValueType::Int, "96", "", "Gauss-Hermite order"},
      {"mc_samples", ValueType::Int, "0", "", "Monte-Carlo cross-check samples; 0 skips"},
      {"r_cap", ValueType::Real, "1e12", "", "ratios above this are reported as capped"},
      // Spectrum and oracle
      {"control", ValueType::Bool, "true", "", "include the control qubit in spectrum"},
      {"max_rows", ValueType::Int, "2000000", "", "refuse spectrum tables larger than this"},
      {"statistics", ValueType::String, "ladder-fermion", "", "oracle particle statistics"},
      {"tolerance", ValueType::Real, "1e-9", "GHz", "oracle acceptance threshold"},
      {"corrupt_mu_c", ValueType::Real, "0", "GHz", "offset added to mu_c on the analytic side (self-test)"},
      {"oracle_T_values", ValueType::RealList, "15", "mK", "temperatures of the thermal oracle check"},
      // Output
      {"emit_timing", ValueType::Bool, "false", "", "record wall time (breaks byte-identical output)"},
  };
  return schema;
}
// clang-format on

inline const KeySpec* find_key(std::string_view name) {
  for (const auto& k : config_schema())
    if (k.name == name) return &k;
  return nullptr;
}

namespace detail {
inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_real(std::string_view key, const std::string& text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (s.empty() || r.ec != std::errc() || r.ptr != end || !std::isfinite(v)) {
    fail(ErrorKind::Config, "key '" + std::string(key) + "': '" + s + "' is not a finite number");
  }
  return v;
}

inline std::int64_t parse_int(std::string_view key, const std::string& text) {
  const std::string s = trim(text);
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (s.empty() || r.ec != std::errc() || r.ptr != end) {
    fail(ErrorKind::Config, "key '" + std::string(key) + "': '" + s + "' is not an integer");
  }
  return v;
}

inline bool parse_bool(std::string_view key, const std::string& text) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  fail(ErrorKind::Config, "key '" + std::string(key) + "': '" + s + "' is not a boolean");
}

/// Comma-separated items; each item is a number or an inclusive start:stop:step range.
inline std::vector<double> parse_real_list(std::string_view key, const std::string& text) {
  std::vector<double> out;
  const std::string s = trim(text);
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(ErrorKind::Config, "key '" + std::string(key) + "': empty list item");
    const auto c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(parse_real(key, item));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    if (c2 == std::string::npos || item.find(':', c2 + 1) != std::string::npos) {
      fail(ErrorKind::Config, "key '" + std::string(key) + "': ranges are written start:stop:step");
    }
    const double a = parse_real(key, item.substr(0, c1));
    const double b = parse_real(key, item.substr(c1 + 1, c2 - c1 - 1));
    const double h = parse_real(key, item.substr(c2 + 1));
    if (h == 0.0 || (b - a) * h < 0.0) fail(ErrorKind::Config, "key '" + std::string(key) + "': range step has the wrong sign");
    const double span = (b - a) / h;
    if (span > 1e7) fail(ErrorKind::Config, "key '" + std::string(key) + "': range has too many points");
    const auto n = static_cast<std::int64_t>(std::floor(span + 1e-9));
    // Points are computed from the index, not accumulated, so 1:10:0.25 hits 10 exactly.
    for (std::int64_t i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * h);
  }
  return out;
}

inline std::vector<int> parse_int_list(std::string_view key, const std::string& text) {
  std::vector<int> out;
  for (double v : parse_real_list(key, text)) {
    if (v != std::round(v) || std::abs(v) > 1e9) {
      fail(ErrorKind::Config, "key '" + std::string(key) + "': " + std::to_string(v) + " is not an integer");
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

inline void check_value(const KeySpec& spec, const std::string& value) {
  switch (spec.type) {
    case ValueType::Int: parse_int(spec.name, value); break;
    case ValueType::Real: parse_real(spec.name, value); break;
    case ValueType::Bool: parse_bool(spec.name, value); break;
    case ValueType::String: break;
    case ValueType::IntList: parse_int_list(spec.name, value); break;
    case ValueType::RealList: parse_real_list(spec.name, value); break;
  }
}
}  // namespace detail

/// Key-value run configuration. Values are kept as validated text so the
/// output echo reproduces exactly what was given.
class RunConfig {
 public:
  RunConfig() {
    for (const auto& k : config_schema()) values_[std::string(k.name)] = std::string(k.default_value);
  }

  void set(const std::string& key, const std::string& value) {
    const KeySpec* spec = find_key(key);
    if (!spec) fail(ErrorKind::Config, "unknown key '" + key + "'");
    const std::string v = detail::trim(value);
    detail::check_value(*spec, v);
    values_[key] = v;
  }

  /// Parses "key=value" as given on the command line.
  void set_assignment(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) fail(ErrorKind::Config, "expected key=value, got '" + text + "'");
    set(detail::trim(text.substr(0, eq)), text.substr(eq + 1));
  }

  /// Reads a key = value file. '#' starts a comment, except that CSV outputs
  /// of this tool can be fed back: their "# config.<key> = <value>" lines are read.
  /// JSON outputs are recognised by a leading '{' and their "config" object is read.
  void load_stream(std::istream& is, const std::string& origin) {
    std::string content((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    const std::string head = detail::trim(content.substr(0, std::min<std::size_t>(content.size(), 64)));
    if (!head.empty() && head.front() == '{') {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(content);
      } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Config, origin + ": " + e.what());
      }
      if (!j.contains("config") || !j["config"].is_object()) fail(ErrorKind::Config, origin + ": no config object");
      for (const auto& [k, v] : j["config"].items()) set(k, v.is_string() ? v.get<std::string>() : v.dump());
      return;
    }
    std::stringstream ss(content);
    std::string line;
    int lineno = 0;
    constexpr std::string_view kEcho = "# config.";
    // A CSV output carries its config in the header; its data rows are skipped.
    const bool echo_only = content.rfind("# schema_version", 0) == 0;
    while (std::getline(ss, line)) {
      ++lineno;
      std::string body;
      if (line.rfind(kEcho, 0) == 0) {
        body = line.substr(kEcho.size());
      } else if (!echo_only) {
        body = line.substr(0, line.find('#'));
      }
      body = detail::trim(body);
      if (body.empty()) continue;
      const auto eq = body.find('=');
      if (eq == std::string::npos) fail(ErrorKind::Config, origin + ":" + std::to_string(lineno) + ": expected key = value");
      try {
        set(detail::trim(body.substr(0, eq)), body.substr(eq + 1));
      } catch (const Error& e) {
        fail(ErrorKind::Config, origin + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
  }

  void load_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) fail(ErrorKind::Config, "cannot open config file " + path.string());
    load_stream(is, path.string());
  }

  const std::string& raw(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) fail(ErrorKind::Config, "unknown key '" + key + "'");
    return it->second;
  }

  std::int64_t get_int(const std::string& key) const { return detail::parse_int(key, raw(key)); }
  double get_real(const std::string& key) const { return detail::parse_real(key, raw(key)); }
  bool get_bool(const std::string& key) const { return detail::parse_bool(key, raw(key)); }
  const std::string& get_string(const std::string& key) const { return raw(key); }

  std::vector<double> get_reals(const std::string& key, bool allow_empty = false) const {
    auto v = detail::parse_real_list(key, raw(key));
    if (v.empty() && !allow_empty) fail(ErrorKind::Config, "sweep axis '" + key + "' is empty");
    return v;
  }
  std::vector<int> get_ints(const std::string& key, bool allow_empty = false) const {
    auto v = detail::parse_int_list(key, raw(key));
    if (v.empty() && !allow_empty) fail(ErrorKind::Config, "sweep axis '" + key + "' is empty");
    return v;
  }

  /// All keys in schema order with their current text.
  std::vector<std::pair<std::string, std::string>> entries() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& k : config_schema()) out.emplace_back(std::string(k.name), values_.at(std::string(k.name)));
    return out;
  }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace bhw::io
