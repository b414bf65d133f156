// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "bhw/thermal.hpp"
#include "commands.hpp"

namespace bhw::cli {

CommandResult cmd_error_rate(const RunContext& ctx) {
  const auto& cfg = ctx.config;
  if (cfg.get_int("n0") >= 0) fail(ErrorKind::Config, "error-rate places k0 with k0_over_pi; leave n0 at -1");
  if (cfg.get_int("N") >= 0) fail(ErrorKind::Config, "error-rate runs at half filling; leave N at -1");
  ModelParams base;
  base.t = cfg.get_real("t");
  base.s_prime = cfg.get_real("s_prime");
  const auto Ls = cfg.get_ints("L_values");
  const auto ss = cfg.get_reals("s_values");
  const auto mucs = cfg.get_reals("mu_c_values");
  const auto temps = cfg.get_reals("T_values");
  const auto opt = thermal_options(ctx);

  const auto scan = error_rate_scan(base, Ls, ss, mucs, temps, cfg.get_real("k0_over_pi"), opt);

  CommandResult res;
  res.doc = make_document("error-rate", ctx);
  auto& t = res.doc.add_table("error_rate", {{"L", "1"},
                                             {"N", "1"},
                                             {"n0", "1"},
                                             {"s", "GHz"},
                                             {"mu_c", "GHz"},
                                             {"T", "mK"},
                                             {"e", "1"},
                                             {"p_meas", "1"},
                                             {"e_meas", "1"},
                                             {"weight_sum", "1"}});
  for (const auto& pt : scan.points) {
    t.add_row({std::int64_t{pt.L}, std::int64_t{pt.N}, std::int64_t{pt.n0}, pt.s, pt.mu_c, pt.T_mK, pt.e, pt.p_meas,
               pt.e_meas, pt.weight_sum});
  }
  auto& c = res.doc.add_table("crossings",
                              {{"T", "mK"}, {"mu_c", "GHz"}, {"L_a", "1"}, {"L_b", "1"}, {"s_c", "GHz"}});
  for (const auto& x : scan.crossings) c.add_row({x.T_mK, x.mu_c, std::int64_t{x.L_a}, std::int64_t{x.L_b}, x.s_c});
  res.doc.report["units"] = opt.units.name();
  res.doc.report["mk_per_ghz"] = opt.units.millikelvin_per_ghz;
  res.message = "error-rate: " + std::to_string(scan.points.size()) + " points, " +
                std::to_string(scan.crossings.size()) + " crossings";
  return res;
}

}  // namespace bhw::cli
