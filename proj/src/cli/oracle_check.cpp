// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <set>

#include "bhw/ed.hpp"
#include "bhw/qubit.hpp"
#include "bhw/thermal.hpp"
#include "commands.hpp"

namespace bhw::cli {

namespace {
std::vector<double> analytic_spectrum(const ModelParams& p) {
  std::vector<double> out;
  for (int q = 0; q <= 3; ++q) {
    const auto s = sector_spectrum(p, q);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

/// k0 indices probed at ring size L: {1, floor(L/4)} unless n0 is fixed in the config.
std::vector<int> n0_battery(const io::RunConfig& cfg, int L) {
  if (cfg.get_int("n0") >= 0) return {n0_from_config(cfg, L)};
  std::set<int> s{1, std::max(1, L / 4)};
  return {s.begin(), s.end()};
}
}  // namespace

CommandResult cmd_oracle_check(const RunContext& ctx) {
  const auto& cfg = ctx.config;
  const auto Ls = cfg.get_ints("L_values");
  const auto Ns = cfg.get_ints("N_values");
  const auto ss = cfg.get_reals("s_values");
  const auto sps = cfg.get_reals("s_prime_values");
  const auto mucs = cfg.get_reals("mu_c_values");
  const auto temps = cfg.get_reals("oracle_T_values", true);
  const auto stats = statistics_from_name(cfg.get_string("statistics"));
  const double tol = cfg.get_real("tolerance");
  const double corrupt = cfg.get_real("corrupt_mu_c");
  const double t = cfg.get_real("t");
  auto topt = thermal_options(ctx);
  topt.threads = 1;

  struct Point {
    ModelParams p;
  };
  std::vector<Point> battery;
  for (int L : Ls) {
    if (L < 3 || L > 8) fail(ErrorKind::Config, "oracle-check supports 3 <= L <= 8");
    for (int N : Ns)
      for (int n0 : n0_battery(cfg, L))
        for (double s : ss)
          for (double sp : sps)
            for (double muc : mucs) {
              if (N < 0 || N > L + 2) continue;
              ModelParams p;
              p.L = L;
              p.N = N;
              p.n0 = n0;
              p.t = t;
              p.s = s;
              p.s_prime = sp;
              p.mu_c = muc;
              battery.push_back({p});
            }
  }
  if (battery.empty()) fail(ErrorKind::Config, "oracle battery is empty");

  struct SpectrumRow {
    std::size_t dim = 0;
    ComparisonReport total;
    double sector_max = 0.0;
    bool dims_ok = false;
    bool resolved = false;
  };
  const auto rows = parallel_map<SpectrumRow>(battery.size(), ctx.threads, [&](std::size_t i) {
    const ModelParams& p = battery[i].p;
    ModelParams pa = p;
    pa.mu_c += corrupt;
    SpectrumRow r;
    const auto H = build_hamiltonian(p, true, p.N, stats);
    r.dim = H.basis.dimension();
    const auto ed = full_spectrum(H);
    r.total = compare_spectra(analytic_spectrum(pa),
                              std::vector<double>(ed.values.data(), ed.values.data() + ed.values.size()));
    const auto Q = k0_number_operator(H.basis, p.n0, stats);
    const auto resolved = resolve_by_charge(H.H, Q);
    r.resolved = resolved.commutator_norm < 1e-9 && resolved.max_label_deviation < 1e-9;
    if (r.resolved) {
      r.dims_ok = true;
      for (int q = 0; q <= 3; ++q) {
        const auto it = resolved.sectors.find(q);
        const std::size_t got = it == resolved.sectors.end() ? 0 : it->second.size();
        if (got != sector_state_count(p.L, p.N, q)) r.dims_ok = false;
        if (got > 0 && got == sector_state_count(p.L, p.N, q)) {
          r.sector_max = std::max(r.sector_max, compare_spectra(sector_spectrum(pa, q), it->second).max_abs);
        }
      }
      if (resolved.sectors.size() > 4) r.dims_ok = false;
    }
    return r;
  });

  CommandResult res;
  res.doc = make_document("oracle-check", ctx);
  auto& spec = res.doc.add_table("spectra", {{"L", "1"},
                                             {"N", "1"},
                                             {"n0", "1"},
                                             {"s", "GHz"},
                                             {"s_prime", "GHz"},
                                             {"mu_c", "GHz"},
                                             {"dimension", "1"},
                                             {"max_abs", "GHz"},
                                             {"mean_abs", "GHz"},
                                             {"sector_max_abs", "GHz"},
                                             {"dims_1331", "1"},
                                             {"pass", "1"}});
  std::size_t failures = 0;
  double worst = 0.0;
  std::size_t worst_i = 0;
  for (std::size_t i = 0; i < battery.size(); ++i) {
    const auto& p = battery[i].p;
    const auto& r = rows[i];
    const bool pass = r.total.max_abs <= tol && r.dims_ok && r.sector_max <= tol;
    failures += pass ? 0 : 1;
    if (r.total.max_abs >= worst) {
      worst = r.total.max_abs;
      worst_i = i;
    }
    spec.add_row({std::int64_t{p.L}, std::int64_t{p.N}, std::int64_t{p.n0}, p.s, p.s_prime, p.mu_c,
                  static_cast<std::int64_t>(r.dim), r.total.max_abs, r.total.mean_abs,
                  r.resolved ? r.sector_max : std::numeric_limits<double>::quiet_NaN(), std::int64_t{r.dims_ok},
                  std::int64_t{pass}});
  }
  nlohmann::json offenders = nlohmann::json::array();
  for (const auto& o : rows[worst_i].total.worst) {
    offenders.push_back({{"index", o.index}, {"analytic", o.analytic}, {"oracle", o.oracle}, {"deviation", o.deviation}});
  }
  res.doc.report["worst_point"] = worst_i;
  res.doc.report["worst_offenders"] = offenders;

  // Thermal cross-check, only for the fermionic ladder where the block solution is exact.
  if (stats == Statistics::LadderFermion && !temps.empty()) {
    auto& th = res.doc.add_table("thermal", {{"L", "1"},
                                             {"N", "1"},
                                             {"n0", "1"},
                                             {"s", "GHz"},
                                             {"s_prime", "GHz"},
                                             {"mu_c", "GHz"},
                                             {"T", "mK"},
                                             {"F", "1"},
                                             {"F_oracle", "1"},
                                             {"p_meas", "1"},
                                             {"p_meas_oracle", "1"},
                                             {"max_abs", "1"},
                                             {"pass", "1"}});
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < battery.size(); ++i) {
      const auto& p = battery[i].p;
      if (p.L <= 6 && p.N >= 1 && p.N <= p.L) idx.push_back(i);
    }
    struct ThermalRow {
      std::vector<FidelityResult> analytic;
      std::vector<OracleThermal> oracle;
    };
    const auto trows = parallel_map<ThermalRow>(idx.size(), ctx.threads, [&](std::size_t j) {
      const auto& p = battery[idx[j]].p;
      ModelParams pa = p;
      pa.mu_c += corrupt;
      ThermalRow r;
      r.analytic = fidelity_scan(pa, temps, topt);
      for (double T : temps) r.oracle.push_back(oracle_thermal(p, p.N, T, topt.units));
      return r;
    });
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const auto& p = battery[idx[j]].p;
      for (std::size_t k = 0; k < temps.size(); ++k) {
        const auto& a = trows[j].analytic[k];
        const auto& o = trows[j].oracle[k];
        const double dev = std::max(std::abs(a.F - o.F), std::abs(a.p_meas - o.p_meas));
        const bool pass = dev <= tol;
        failures += pass ? 0 : 1;
        th.add_row({std::int64_t{p.L}, std::int64_t{p.N}, std::int64_t{p.n0}, p.s, p.s_prime, p.mu_c, temps[k], a.F,
                    o.F, a.p_meas, o.p_meas, dev, std::int64_t{pass}});
      }
    }
  }

  res.doc.report["failures"] = failures;
  res.doc.report["statistics"] = to_string(stats);
  res.exit_code = failures == 0 ? kExitOk : kExitOracleMismatch;
  res.message = "oracle-check: " + std::to_string(battery.size()) + " points, " + std::to_string(failures) +
                " failures, worst spectral deviation " + io::format_double(worst);
  return res;
}

}  // namespace bhw::cli
