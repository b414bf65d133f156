// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Exit codes: 0 ok, 2 config error, 3 numerical
// error, 4 oracle mismatch.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "bhw/parallel.hpp"

namespace {

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv(bhw::kThreadsEnv)) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 4096) {
      bhw::fail(bhw::ErrorKind::Config, std::string(bhw::kThreadsEnv) + " must be an integer in [1, 4096]");
    }
    return static_cast<int>(v);
  }
  return 1;
}

void print_keys() {
  for (const auto& k : bhw::io::config_schema()) {
    std::printf("%-18s %-10s %-26s %s\n", std::string(k.name).c_str(), std::string(k.unit).c_str(),
                std::string(k.default_value).c_str(), std::string(k.help).c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact block solution, disorder and thermal readout of a ring-plus-center qubit array"};
  app.set_version_flag("--version", std::string(bhw::io::kVersion));

  std::string command;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out = "-";
  std::string format = "csv";
  int threads = 0;
  long long seed = -1;
  bool list_keys = false;

  app.add_option("command", command, "spectrum | error-rate | fidelity-dist | disorder | coupling | oracle-check")
      ->check(CLI::IsMember(bhw::cli::command_names()));
  app.add_option("--config", config_path, "key = value configuration file (an earlier CSV or JSON output also works)");
  app.add_option("--set", overrides, "override one key, key=value; repeatable, applied after --config");
  app.add_option("--out", out, "output path, '-' for stdout");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", threads, "worker threads (default: $BHW_THREADS, else 1)")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "master seed; overrides the config")->check(CLI::NonNegativeNumber);
  app.add_flag("--list-keys", list_keys, "print every accepted config key and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : bhw::cli::kExitConfig;
  }
  if (list_keys) {
    print_keys();
    return 0;
  }
  if (command.empty()) {
    std::cerr << "bhw: a command is required (see --help)\n";
    return bhw::cli::kExitConfig;
  }

  try {
    bhw::cli::RunContext ctx;
    if (!config_path.empty()) ctx.config.load_file(config_path);
    for (const auto& o : overrides) ctx.config.set_assignment(o);
    if (seed >= 0) ctx.config.set("seed", std::to_string(seed));
    ctx.threads = resolve_threads(threads);
    const auto fmt = bhw::io::format_from_name(format);

    const auto start = std::chrono::steady_clock::now();
    auto res = bhw::cli::run_command(command, ctx);
    if (ctx.config.get_bool("emit_timing")) {
      res.doc.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    bhw::io::write_document(res.doc, out, fmt);
    std::cerr << res.message << '\n';
    return res.exit_code;
  } catch (const bhw::Error& e) {
    std::cerr << "bhw: " << e.what() << '\n';
    return bhw::cli::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "bhw: unexpected failure: " << e.what() << '\n';
    return bhw::cli::kExitNumerical;
  }
}
