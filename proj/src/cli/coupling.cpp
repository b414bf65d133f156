// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include "bhw/coupling.hpp"
#include "commands.hpp"

namespace bhw::cli {

namespace {
constexpr double kNm = 1e-9;

struct Capped {
  double value;
  bool capped;
};
Capped cap(double r, double limit) {
  if (!std::isfinite(r) || std::abs(r) > limit) return {std::copysign(limit, r), true};
  return {r, false};
}
}  // namespace

CommandResult cmd_coupling(const RunContext& ctx) {
  const auto& cfg = ctx.config;
  OscillatorParams osc;
  osc.omega = 2.0 * std::numbers::pi * cfg.get_real("omega_ghz") * 1e9;
  osc.mass = cfg.get_real("mass_kg");
  osc.validate();
  // Report moments in units of hbar omega so they read as dimensionless ratios.
  osc.energy_scale = 1.0;
  const double r_cap = cfg.get_real("r_cap");
  if (!(r_cap > 0.0)) fail(ErrorKind::Config, "r_cap must be > 0");
  const double s_display = cfg.get_real("s_display");

  OptimizeOptions oo;
  oo.coupling.nodes = static_cast<int>(cfg.get_int("quadrature_nodes"));
  oo.coupling.mc_samples = static_cast<std::uint64_t>(std::max<std::int64_t>(0, cfg.get_int("mc_samples")));
  oo.coupling.seed = seed_from_config(cfg);

  const auto das = cfg.get_reals("delta_a_values");
  const auto as = cfg.get_reals("a_values", true);

  CommandResult res;
  res.doc = make_document("coupling", ctx);
  res.doc.report["zero_crossing_nm"] = osc.zero_crossing() / kNm;
  auto& opt_t = res.doc.add_table("optimum", {{"delta_a", "nm"},
                                              {"a_opt", "nm"},
                                              {"r_opt", "1"},
                                              {"capped", "1"},
                                              {"mean_s", "hbar*omega"},
                                              {"sigma_s", "hbar*omega"},
                                              {"quadrature_error", "hbar*omega"},
                                              {"broadening", "GHz"},
                                              {"grid_a", "nm"}});
  // Independent optimizations run in parallel; rows are written in input order.
  const auto optima = parallel_map<DistanceOptimum>(das.size(), ctx.threads, [&](std::size_t i) {
    auto o = oo;
    o.coupling.seed = oo.coupling.seed + i;
    return optimize_distance(das[i] * kNm, osc, o);
  });
  for (const auto& o : optima) {
    const auto r = cap(o.r_opt, r_cap);
    opt_t.add_row({o.delta_a / kNm, o.a_opt / kNm, r.value, std::int64_t{r.capped}, o.estimate.mean, o.estimate.sigma,
                   o.estimate.quadrature_error, s_display / std::abs(r.value), o.grid_a / kNm});
  }

  if (!as.empty()) {
    auto& curves = res.doc.add_table("curves", {{"delta_a", "nm"},
                                                {"a", "nm"},
                                                {"s_of_a", "hbar*omega"},
                                                {"mean_s", "hbar*omega"},
                                                {"sigma_s", "hbar*omega"},
                                                {"r", "1"},
                                                {"capped", "1"}});
    CouplingOptions co = oo.coupling;
    co.mc_samples = 0;
    for (double da : das) {
      for (double a : as) {
        const auto e = coupling_moments(a * kNm, da * kNm, osc, co);
        const auto r = cap(e.ratio, r_cap);
        curves.add_row({da, a, hopping_amplitude(a * kNm, osc), e.mean, e.sigma, r.value, std::int64_t{r.capped}});
      }
    }
  }
  res.message = "coupling: " + std::to_string(das.size()) + " placement spreads";
  return res;
}

}  // namespace bhw::cli
