// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#include <functional>
#include <map>

#include "commands.hpp"

namespace bhw::cli {

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"spectrum", "error-rate", "fidelity-dist",
                                                 "disorder", "coupling",   "oracle-check"};
  return names;
}

CommandResult run_command(const std::string& name, const RunContext& ctx) {
  static const std::map<std::string, std::function<CommandResult(const RunContext&)>> table = {
      {"spectrum", cmd_spectrum}, {"error-rate", cmd_error_rate}, {"fidelity-dist", cmd_fidelity_dist},
      {"disorder", cmd_disorder}, {"coupling", cmd_coupling},     {"oracle-check", cmd_oracle_check},
  };
  const auto it = table.find(name);
  if (it == table.end()) fail(ErrorKind::Config, "unknown command '" + name + "'");
  return it->second(ctx);
}

int exit_code_for(const Error& e) { return e.is_input_error() ? kExitConfig : kExitNumerical; }

int n0_from_config(const io::RunConfig& cfg, int L) {
  const auto n0 = cfg.get_int("n0");
  if (n0 < 0) return n0_for_fraction(L, cfg.get_real("k0_over_pi"));
  if (n0 >= L) fail(ErrorKind::InvalidGeometry, "n0 = " + std::to_string(n0) + " must be < L = " + std::to_string(L));
  return static_cast<int>(n0);
}

ModelParams model_from_config(const io::RunConfig& cfg) {
  ModelParams p;
  const auto L = cfg.get_int("L");
  if (L < 3 || L > kMaxRingSites) fail(ErrorKind::InvalidGeometry, "L must lie in [3, " + std::to_string(kMaxRingSites) + "]");
  p.L = static_cast<int>(L);
  p.t = cfg.get_real("t");
  p.s = cfg.get_real("s");
  p.s_prime = cfg.get_real("s_prime");
  p.mu_c = cfg.get_real("mu_c");
  p.n0 = n0_from_config(cfg, p.L);
  const auto N = cfg.get_int("N");
  p.N = N < 0 ? p.L / 2 : static_cast<int>(N);
  return p;
}

UnitSystem units_from_config(const io::RunConfig& cfg) {
  const auto& name = cfg.get_string("units");
  if (name == "custom") return UnitSystem::custom(cfg.get_real("mk_per_ghz"));
  return UnitSystem::from_name(name);
}

ThermalOptions thermal_options(const RunContext& ctx) {
  ThermalOptions opt;
  opt.units = units_from_config(ctx.config);
  const auto& strategy = ctx.config.get_string("strategy");
  if (strategy == "classes") {
    opt.strategy = FsStrategy::EnergyClasses;
  } else if (strategy == "determinants") {
    opt.strategy = FsStrategy::PerDeterminant;
  } else {
    fail(ErrorKind::Config, "strategy must be classes or determinants");
  }
  opt.threads = ctx.threads;
  opt.verify_normalization = true;
  return opt;
}

std::uint64_t seed_from_config(const io::RunConfig& cfg) {
  const auto s = cfg.get_int("seed");
  if (s < 0) fail(ErrorKind::Config, "seed must be >= 0");
  return static_cast<std::uint64_t>(s);
}

io::Document make_document(const std::string& command, const RunContext& ctx) {
  io::Document doc;
  doc.command = command;
  doc.seed = seed_from_config(ctx.config);
  doc.config = ctx.config.entries();
  return doc;
}

}  // namespace bhw::cli
