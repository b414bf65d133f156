// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "bhw/disorder.hpp"
#include "commands.hpp"

namespace bhw::cli {

namespace {
void add_fit(io::ResultTable& t, const std::string& what, const LinearFit& f) {
  t.add_row({what, f.slope, f.slope_se, f.intercept, f.r2, static_cast<std::int64_t>(f.points)});
}
}  // namespace

CommandResult cmd_disorder(const RunContext& ctx) {
  const auto& cfg = ctx.config;
  const ModelParams p = model_from_config(cfg);
  p.validate(false);
  const auto seed = seed_from_config(cfg);
  const auto K = cfg.get_int("K");
  if (K < 100) fail(ErrorKind::Config, "disorder statistics need K >= 100");
  const auto sigmas = cfg.get_reals("sigma_values");

  CommandResult res;
  res.doc = make_document("disorder", ctx);

  // One realization in detail: every root with its bracket, plus the bound boxes.
  const auto real = sample_disorder(cfg.get_real("sigma"), p.L, seed, static_cast<std::uint64_t>(cfg.get_int("realization")));
  const auto couplings = fourier_couplings(real, p);
  const auto sol = solve_marginals(couplings, p);
  auto& roots = res.doc.add_table("roots", {{"kind", "1"}, {"E", "GHz"}, {"lo", "GHz"}, {"hi", "GHz"}, {"multiplicity", "1"}});
  roots.add_row({std::string("E_minus"), sol.E_minus, sol.bounds.minus_lower, sol.bounds.minus_upper, std::int64_t{1}});
  for (const auto& r : sol.interior) roots.add_row({std::string("interior"), r.root, r.lo, r.hi, std::int64_t{1}});
  for (const auto& pole : sol.pole_levels) {
    roots.add_row({std::string("pole"), pole.energy, pole.energy, pole.energy, std::int64_t{pole.multiplicity}});
  }
  roots.add_row({std::string("E_plus"), sol.E_plus, sol.bounds.plus_lower, sol.bounds.plus_upper, std::int64_t{1}});
  auto& deltas = res.doc.add_table("realization", {{"j", "1"}, {"delta_s", "GHz"}, {"abs_f_k", "1"}});
  for (int j = 0; j < p.L; ++j) deltas.add_row({std::int64_t{j}, real.deltas[j], std::abs(couplings.f[j])});

  auto& stats = res.doc.add_table("statistics", {{"sigma", "GHz"},
                                                 {"K", "1"},
                                                 {"mean_minus", "GHz"},
                                                 {"se_minus", "GHz"},
                                                 {"var_minus", "GHz^2"},
                                                 {"mean_plus", "GHz"},
                                                 {"se_plus", "GHz"},
                                                 {"var_plus", "GHz^2"},
                                                 {"unperturbed_minus", "GHz"},
                                                 {"unperturbed_plus", "GHz"},
                                                 {"bound_violations", "1"},
                                                 {"root_count_violations", "1"},
                                                 {"max_residual", "GHz"}});
  const auto scaling = variance_scaling(p, sigmas, static_cast<std::uint64_t>(K), seed, ctx.threads);
  for (const auto& d : scaling.points) {
    stats.add_row({d.sigma, static_cast<std::int64_t>(d.K), d.minus.mean, d.minus.standard_error(), d.minus.variance(),
                   d.plus.mean, d.plus.standard_error(), d.plus.variance(), d.unperturbed_minus, d.unperturbed_plus,
                   static_cast<std::int64_t>(d.bound_violations), static_cast<std::int64_t>(d.root_count_violations),
                   d.max_residual});
  }
  auto& fits = res.doc.add_table(
      "fits", {{"quantity", "1"}, {"slope", "1"}, {"slope_se", "1"}, {"intercept", "1"}, {"r2", "1"}, {"points", "1"}});
  const bool fit_ok = sigmas.size() >= 2 && std::all_of(scaling.points.begin(), scaling.points.end(),
                                                         [](const DisorderStats& d) { return d.minus.variance() > 0.0; });
  if (fit_ok) {
    add_fit(fits, "log_var_minus_vs_log_sigma", scaling.minus);
    add_fit(fits, "log_var_plus_vs_log_sigma", scaling.plus);
  }

  const auto noise_Ls = cfg.get_ints("noise_L_values", true);
  if (!noise_Ls.empty()) {
    NoiseScalingOptions nopt;
    nopt.filling = cfg.get_real("filling");
    nopt.k0_over_pi = cfg.get_real("k0_over_pi");
    nopt.antithetic = cfg.get_bool("noise_antithetic");
    nopt.threads = ctx.threads;
    const auto noise_K = cfg.get_int("noise_K");
    if (noise_K < 1) fail(ErrorKind::Config, "noise_K must be >= 1");
    const auto rep = many_body_noise_scaling(p, cfg.get_real("noise_sigma"), noise_Ls,
                                             static_cast<std::uint64_t>(noise_K), seed, nopt);
    auto& ns = res.doc.add_table("noise_scaling", {{"L", "1"},
                                                   {"N", "1"},
                                                   {"n0", "1"},
                                                   {"s_tilde", "GHz"},
                                                   {"mean_shift_minus", "GHz"},
                                                   {"se_shift_minus", "GHz"},
                                                   {"mean_shift_plus", "GHz"},
                                                   {"se_shift_plus", "GHz"},
                                                   {"c_minus", "1"},
                                                   {"c_plus", "1"},
                                                   {"c1_minus", "1"},
                                                   {"c1_plus", "1"},
                                                   {"first_order_var_minus", "GHz^2"},
                                                   {"central_var", "GHz^2"}});
    for (const auto& pt : rep.points) {
      ns.add_row({std::int64_t{pt.L}, std::int64_t{pt.N}, std::int64_t{pt.n0}, pt.s_tilde, pt.shift_minus.mean,
                  pt.shift_minus.standard_error(), pt.shift_plus.mean, pt.shift_plus.standard_error(), pt.c_minus,
                  pt.c_plus, pt.c1_minus, pt.c1_plus, pt.first_order_minus.variance(), pt.central.variance()});
    }
    if (rep.fits_valid) {
      add_fit(fits, "log_abs_shift_minus_vs_log_L", rep.mean_shift_minus);
      add_fit(fits, "log_abs_shift_plus_vs_log_L", rep.mean_shift_plus);
      add_fit(fits, "log_central_var_vs_log_L", rep.central_variance);
    }
  }
  if (p.k0_is_special()) res.doc.report["warning"] = "n0 is 0 or L/2, where the closed-form k0-block coefficients degenerate";
  res.message = "disorder: " + std::to_string(sigmas.size()) + " sigma values, K = " + std::to_string(K);
  return res;
}

}  // namespace bhw::cli
