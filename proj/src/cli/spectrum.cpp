// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>

#include "bhw/combinatorics.hpp"
#include "bhw/qubit.hpp"
#include "bhw/wheel.hpp"
#include "commands.hpp"

namespace bhw::cli {

namespace {
double or_nan(const std::optional<double>& v) { return v ? *v : std::numeric_limits<double>::quiet_NaN(); }
}  // namespace

CommandResult cmd_spectrum(const RunContext& ctx) {
  const auto& cfg = ctx.config;
  ModelParams base = model_from_config(cfg);
  const bool control = cfg.get_bool("control");
  const auto s_values = cfg.get_reals("s_values");
  base.validate(control);

  // Refuse tables that would not fit in memory before doing any work.
  std::uint64_t per_s = 0;
  if (control) {
    for (int q = 0; q <= 3; ++q) per_s += sector_state_count(base.L, base.N, q);
  } else {
    for (int q : {0, 1, 1, 2}) per_s += binomial(base.L - 1, base.N - q);
  }
  const auto max_rows = static_cast<std::uint64_t>(std::max<std::int64_t>(0, cfg.get_int("max_rows")));
  if (per_s * s_values.size() > max_rows) {
    fail(ErrorKind::Size, "spectrum would have " + std::to_string(per_s * s_values.size()) +
                              " rows, above max_rows = " + std::to_string(max_rows));
  }

  CommandResult res;
  res.doc = make_document("spectrum", ctx);
  if (control) {
    auto& levels = res.doc.add_table("levels", {{"s", "GHz"},
                                                {"s_tilde", "GHz"},
                                                {"N_k0", "1"},
                                                {"nu", "1"},
                                                {"mu", "1"},
                                                {"E", "GHz"},
                                                {"n_c", "1"}});
    auto& gaps = res.doc.add_table("gaps", {{"s", "GHz"}, {"s_tilde", "GHz"}, {"delta_E", "GHz"}, {"delta_E_AH", "GHz"}});
    for (double s : s_values) {
      ModelParams p = base;
      p.s = s;
      for_each_sector_state(p, [&](const SectorEigenstate& st) {
        levels.add_row({s, p.s_tilde(), std::int64_t{st.n_k0}, std::int64_t{st.nu}, static_cast<std::int64_t>(st.mu),
                        st.energy, st.n_c});
      });
      // The gaps compare fillings N and N+1, which needs room for one more particle.
      if (p.N + 1 <= p.L + 2) {
        const auto g = logical_gap(p, p.N);
        gaps.add_row({s, p.s_tilde(), or_nan(g.delta_E), or_nan(g.delta_E_AH)});
      }
    }
  } else {
    auto& levels = res.doc.add_table(
        "levels", {{"s", "GHz"}, {"s_tilde", "GHz"}, {"sector", "1"}, {"parity", "1"}, {"mu", "1"}, {"E", "GHz"}});
    for (double s : s_values) {
      ModelParams p = base;
      p.s = s;
      std::int64_t mu = 0;
      WheelSector current = WheelSector::Zero;
      for (const auto& lvl : wheel_spectrum(p)) {
        if (lvl.sector != current) {
          current = lvl.sector;
          mu = 0;
        }
        levels.add_row({s, p.s_tilde(), to_string(lvl.sector),
                        std::string(parity(lvl.sector) == Parity::Even ? "even" : "odd"), mu++, lvl.energy});
      }
    }
  }
  if (base.k0_is_special()) res.doc.report["warning"] = "n0 is 0 or L/2, where the closed-form k0-block coefficients degenerate";
  res.message = "spectrum: " + std::to_string(res.doc.tables.front().rows().size()) + " levels";
  return res;
}

}  // namespace bhw::cli
