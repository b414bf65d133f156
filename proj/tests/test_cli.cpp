// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli/commands.hpp"

namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
};

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "bhw_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Runs the installed tool through the shell; stdout goes to a file, stderr is dropped.
Run run(const std::string& args, const std::string& env = "") {
  const auto out = scratch("stdout.txt");
  const std::string cmd = env + " \"" BHW_TOOL_PATH "\" " + args + " > \"" + out.string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  return r;
}

const char* kSmallSpectrum = "spectrum --set L=4 --set s_values=0.5,1 --set mu_c_values=2";

TEST(Tool, EveryCommandRunsOnSmallInputs) {
  const std::vector<std::string> cmds{
      kSmallSpectrum,
      "error-rate --set L_values=4,6 --set s_values=1,2 --set T_values=15",
      "fidelity-dist --set L=4 --set s=2 --set M=50 --set K=20 --set mu_c_values=11,12",
      "disorder --set sigma_values=0.01,0.02 --set K=200",
      "coupling --set delta_a_values=1,2",
      "oracle-check --set L_values=4 --set N_values=1,2 --set s_values=1 --set s_prime_values=0.1 --set mu_c_values=2",
  };
  for (const auto& c : cmds) {
    const auto r = run(c);
    EXPECT_EQ(r.code, 0) << c;
    EXPECT_EQ(r.out.rfind("# schema_version = 1\n", 0), 0u) << c;
    EXPECT_NE(r.out.find("# config.L = "), std::string::npos) << c;
    EXPECT_NE(r.out.find("# seed = "), std::string::npos) << c;
  }
}

TEST(Tool, ExitCodes) {
  EXPECT_EQ(run("spectrum --set bogus=1").code, 2);
  EXPECT_EQ(run("spectrum --set L=2").code, 2);
  EXPECT_EQ(run("error-rate --set L_values=").code, 2);
  EXPECT_EQ(run("nonsense").code, 2);
  EXPECT_EQ(run("spectrum --config /nonexistent/file.conf").code, 2);
  EXPECT_EQ(run("spectrum --format xml").code, 2);
  EXPECT_EQ(run("coupling --set mass_kg=1 --set delta_a_values=1").code, 3);
  EXPECT_EQ(run("oracle-check --set L_values=4 --set N_values=2 --set s_values=1 --set s_prime_values=0.1 "
                "--set mu_c_values=2 --set corrupt_mu_c=0.01")
                .code,
            4);
  EXPECT_EQ(run("oracle-check --set L_values=4 --set N_values=2 --set s_values=1 --set s_prime_values=0.1 "
                "--set mu_c_values=2 --set statistics=hardcore-boson")
                .code,
            4);
}

TEST(Tool, ThreadsFromEnvironmentAndFlag) {
  const std::string args = "fidelity-dist --set L=6 --set s=3 --set M=100 --set K=64 --set calibrate=false";
  const auto one = run(args + " --threads 1");
  const auto env = run(args, "BHW_THREADS=4");
  const auto flag = run(args + " --threads 3", "BHW_THREADS=4");
  ASSERT_EQ(one.code, 0);
  EXPECT_EQ(one.out, env.out);
  EXPECT_EQ(one.out, flag.out);
  EXPECT_EQ(run(args, "BHW_THREADS=zero").code, 2);
  EXPECT_EQ(run(args + " --threads 2", "BHW_THREADS=zero").code, 0);
}

TEST(Tool, ByteIdenticalReruns) {
  const std::string args = "disorder --set sigma_values=0.01,0.04 --set K=300 --seed 9";
  EXPECT_EQ(run(args).out, run(args).out);
  EXPECT_NE(run(args).out, run("disorder --set sigma_values=0.01,0.04 --set K=300 --seed 10").out);
}

TEST(Tool, OutputReproducesItsOwnRun) {
  const auto first = scratch("first.csv");
  ASSERT_EQ(run(std::string(kSmallSpectrum) + " --set L=6 --out \"" + first.string() + "\"").code, 0);
  const auto again = run("spectrum --config \"" + first.string() + "\"");
  EXPECT_EQ(again.code, 0);
  EXPECT_EQ(again.out, slurp(first));

  const auto jpath = scratch("first.json");
  ASSERT_EQ(run(std::string(kSmallSpectrum) + " --format json --out \"" + jpath.string() + "\"").code, 0);
  const auto j = nlohmann::json::parse(slurp(jpath));
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["config"]["L"], "4");
  const auto rerun = run("spectrum --format json --config \"" + jpath.string() + "\"");
  EXPECT_EQ(rerun.out, slurp(jpath));
}

TEST(Tool, SampleConfigsParse) {
  for (const auto& entry : fs::directory_iterator(fs::path(BHW_SOURCE_DIR) / "configs")) {
    bhw::io::RunConfig c;
    EXPECT_NO_THROW(c.load_file(entry.path())) << entry.path();
  }
}

TEST(Commands, InProcessDispatch) {
  bhw::cli::RunContext ctx;
  ctx.config.set("L", "4");
  ctx.config.set("s_values", "1");
  const auto res = bhw::cli::run_command("spectrum", ctx);
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_EQ(res.doc.command, "spectrum");
  // Default filling N = L/2 on 4 sites plus center and control: C(6, 2) levels.
  EXPECT_EQ(res.doc.table("levels").rows().size(), 15u);
}

}  // namespace
