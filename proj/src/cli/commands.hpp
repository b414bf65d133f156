// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bhw/errors.hpp"
#include "bhw/io/config.hpp"
#include "bhw/io/table.hpp"
#include "bhw/model.hpp"
#include "bhw/thermal.hpp"
#include "bhw/units.hpp"

namespace bhw::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitOracleMismatch = 4,
};

struct RunContext {
  io::RunConfig config;
  int threads = 1;
};

struct CommandResult {
  io::Document doc;
  int exit_code = kExitOk;
  std::string message;  // one-line summary for stderr
};

const std::vector<std::string>& command_names();

/// Runs one command. Library errors propagate as bhw::Error.
CommandResult run_command(const std::string& name, const RunContext& ctx);

/// Input errors map to 2, everything else to 3.
int exit_code_for(const Error& e);

// Helpers shared by the command implementations.
ModelParams model_from_config(const io::RunConfig& cfg);
int n0_from_config(const io::RunConfig& cfg, int L);
UnitSystem units_from_config(const io::RunConfig& cfg);
ThermalOptions thermal_options(const RunContext& ctx);
std::uint64_t seed_from_config(const io::RunConfig& cfg);
io::Document make_document(const std::string& command, const RunContext& ctx);

CommandResult cmd_spectrum(const RunContext& ctx);
CommandResult cmd_error_rate(const RunContext& ctx);
CommandResult cmd_fidelity_dist(const RunContext& ctx);
CommandResult cmd_disorder(const RunContext& ctx);
CommandResult cmd_coupling(const RunContext& ctx);
CommandResult cmd_oracle_check(const RunContext& ctx);

}  // namespace bhw::cli
