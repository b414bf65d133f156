// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#include "bhw/thermal.hpp"
#include "commands.hpp"

namespace bhw::cli {

CommandResult cmd_fidelity_dist(const RunContext& ctx) {
  const auto& cfg = ctx.config;
  const ModelParams p = model_from_config(cfg);
  const double T = cfg.get_real("T");
  const auto M = cfg.get_int("M");
  const auto K = cfg.get_int("K");
  if (M < 1 || K < 1) fail(ErrorKind::Config, "M and K must be >= 1");
  const auto opt = thermal_options(ctx);
  const auto seed = seed_from_config(cfg);

  const auto fid = xgate_fidelity(p, p.N, T, opt);
  const auto sim = simulate_from_probabilities(fid.F, fid.p_meas, T, static_cast<std::uint64_t>(M),
                                               static_cast<std::uint64_t>(K), seed, ctx.threads);

  CommandResult res;
  res.doc = make_document("fidelity-dist", ctx);
  auto& summary = res.doc.add_table("summary", {{"L", "1"},
                                                {"N", "1"},
                                                {"n0", "1"},
                                                {"s", "GHz"},
                                                {"mu_c", "GHz"},
                                                {"T", "mK"},
                                                {"F", "1"},
                                                {"e", "1"},
                                                {"p_meas", "1"},
                                                {"e_meas", "1"},
                                                {"empirical_mean", "1"},
                                                {"shift", "1"},
                                                {"expected_shift", "1"},
                                                {"standard_error", "1"},
                                                {"weight_sum", "1"}});
  summary.add_row({std::int64_t{p.L}, std::int64_t{p.N}, std::int64_t{p.n0}, p.s, p.mu_c, T, fid.F, fid.error_rate,
                   fid.p_meas, fid.e_meas, sim.empirical_mean, sim.shift, sim.expected_shift, sim.standard_error,
                   fid.weight_sum});

  auto& hist = res.doc.add_table(
      "histogram", {{"N_1", "1"}, {"n_e", "1"}, {"empirical", "1"}, {"binomial_F", "1"}, {"binomial_p_meas", "1"}});
  const auto pmf_meas = binomial_pmf(sim.M, sim.p_meas);
  for (std::uint64_t n = 0; n <= sim.M; ++n) {
    hist.add_row({static_cast<std::int64_t>(n), static_cast<double>(n) / static_cast<double>(sim.M), sim.empirical[n],
                  sim.theoretical[n], pmf_meas[n]});
  }

  if (cfg.get_bool("calibrate")) {
    const auto grid = cfg.get_reals("mu_c_values");
    const auto cal = calibrate_mu_c(p, p.N, T, grid, opt);
    auto& c = res.doc.add_table("calibration", {{"mu_c", "GHz"},
                                                {"e", "1"},
                                                {"e_meas", "1"},
                                                {"e_readout", "1"},
                                                {"weight_sum", "1"},
                                                {"optimum", "1"}});
    for (std::size_t i = 0; i < cal.mu_c.size(); ++i) {
      c.add_row({cal.mu_c[i], cal.e[i], cal.e_meas[i], cal.e_readout[i], cal.weight_sum[i],
                 std::int64_t{i == cal.argmin ? 1 : 0}});
    }
    res.doc.report["mu_c_star"] = cal.mu_c_star;
  }
  res.doc.report["units"] = opt.units.name();
  res.message = "fidelity-dist: F = " + io::format_double(fid.F) + ", p_meas = " + io::format_double(fid.p_meas);
  return res;
}

}  // namespace bhw::cli
