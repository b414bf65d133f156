// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance battery. Prints one PASS/FAIL line per criterion; every
// tolerance is a named constant below and is not read from anywhere else.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bhw/bhw.hpp"

namespace {

using namespace bhw;

// Pinned tolerances.
constexpr double kOracleTol = 1e-9;             // criterion 1
constexpr double kMarginalTol = 1e-11;          // criterion 2
constexpr double kMeanShiftFactor = 5.0;        // criterion 3: |mean - clean| <= 5 sigma^2 / s
constexpr double kVarianceSlope = 2.0;          // criterion 3
constexpr double kVarianceSlopeTol = 0.1;
constexpr double kNoiseSlope = -1.5;            // criterion 4
constexpr double kNoiseSlopeTol = 0.2;
constexpr double kCoefficientSigmas = 3.0;      // criterion 4: sampled c_pm against first order
constexpr double kHeadlineError = 1e-3;         // criterion 5
constexpr double kCalibrationWindow = 1.0;      // GHz around mu_c = 17
constexpr double kReadoutError = 1e-3;
constexpr double kFloorFactor = 2.0;            // criterion 6: floor begins where e <= 2 min e
constexpr double kMinimumDrop = 10.0;           // criterion 6: e(s_min) / e(s_floor) >= 10
constexpr double kShiftSigmas = 4.0;            // criterion 7
constexpr double kShiftTarget = 3e-3;
constexpr double kShiftTargetTol = 2e-3;
constexpr double kShiftLarge = 1e-3;
constexpr double kRatioLow = 5e3;               // criterion 8
constexpr double kRatioHigh = 5e4;
constexpr double kNormalizationTol = 1e-12;     // criterion 9
constexpr double kInequalitySlack = 1e-14;
constexpr double kThreadTol = 1e-12;            // criterion 10

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<double> analytic_spectrum(const ModelParams& p) {
  std::vector<double> out;
  for (int q = 0; q <= 3; ++q) {
    const auto s = sector_spectrum(p, q);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

std::vector<double> eigenvalues(const DenseHamiltonian& H) {
  const auto s = full_spectrum(H);
  return {s.values.data(), s.values.data() + s.values.size()};
}

// ---------------------------------------------------------------------------
// 1. Analytic sector spectra against Fock-space diagonalization.

Outcome criterion_1() {
  double worst_hcb = 0.0, worst_ladder = 0.0;
  std::size_t points = 0, dim_failures = 0;
  for (int L : {4, 6, 8}) {
    std::vector<int> n0s{1, L / 4};
    n0s.erase(std::unique(n0s.begin(), n0s.end()), n0s.end());
    for (int N = 1; N <= 4; ++N)
      for (int n0 : n0s)
        for (double s : {0.5, 2.0, 8.0})
          for (double sp : {0.0, 0.01, 1.0})
            for (double muc : {0.0, 10.0}) {
              ModelParams p;
              p.L = L;
              p.N = N;
              p.n0 = n0;
              p.s = s;
              p.s_prime = sp;
              p.mu_c = muc;
              const auto analytic = analytic_spectrum(p);
              const auto hcb = build_hamiltonian(p, true, N, Statistics::HardcoreBoson);
              const auto ladder = build_hamiltonian(p, true, N, Statistics::LadderFermion);
              worst_hcb = std::max(worst_hcb, compare_spectra(analytic, eigenvalues(hcb)).max_abs);
              worst_ladder = std::max(worst_ladder, compare_spectra(analytic, eigenvalues(ladder)).max_abs);
              const auto res = resolve_by_charge(ladder.H, k0_number_operator(ladder.basis, n0, Statistics::LadderFermion));
              for (int q = 0; q <= 3; ++q) {
                const auto it = res.sectors.find(q);
                const std::size_t got = it == res.sectors.end() ? 0 : it->second.size();
                const int m = N - q;
                const std::uint64_t backgrounds = (m < 0 || m > L - 1) ? 0 : binomial(L - 1, m);
                if (got != backgrounds * static_cast<std::uint64_t>(sector_dimension(q))) ++dim_failures;
                if (got > 0 && compare_spectra(sector_spectrum(p, q), it->second).max_abs > kOracleTol) ++dim_failures;
              }
              ++points;
            }
  }
  Outcome o;
  o.pass = worst_hcb <= kOracleTol && dim_failures == 0;
  o.detail = std::to_string(points) + " points; hardcore-boson oracle max|dE| = " + fmt("%.3g", worst_hcb) +
             " (tol 1e-9); ladder-fermion oracle max|dE| = " + fmt("%.3g", worst_ladder) +
             "; 1-3-3-1 sector mismatches = " + std::to_string(dim_failures);
  return o;
}

// ---------------------------------------------------------------------------
// 2. Clean marginal energies.

Outcome criterion_2() {
  double worst = 0.0;
  int cases = 0;
  for (int L : {3, 4, 6, 7, 10, 16})
    for (int n0 = 0; n0 < L; ++n0)
      for (double s : {0.1, 0.7, 1.5, 4.0, 12.0})
        for (double t : {1.0, 0.4}) {
          ModelParams p;
          p.L = L;
          p.n0 = n0;
          p.s = s;
          p.t = t;
          p.N = 1;
          const auto sol = solve_marginals(fourier_couplings(sample_disorder(0.0, L, 1), p), p);
          const double c = t * std::cos(p.k0());
          const double root = std::sqrt(c * c + p.s_tilde() * p.s_tilde());
          worst = std::max({worst, std::abs(sol.E_minus - (-c - root)), std::abs(sol.E_plus - (-c + root))});
          ++cases;
        }
  return {worst <= kMarginalTol, std::to_string(cases) + " cases; max deviation " + fmt("%.3g", worst) + " (tol 1e-11)"};
}

// ---------------------------------------------------------------------------
// 3. Disorder statistics at L=6, k0=pi/3, s/t=1.5.

Outcome criterion_3() {
  ModelParams p;
  p.L = 6;
  p.n0 = 1;
  p.s = 1.5;
  p.N = 1;
  const double sigma = 0.01;
  const auto st = disorder_statistics(p, sigma, 10000, 1);
  const double dm = std::abs(st.minus.mean - st.unperturbed_minus);
  const double dp = std::abs(st.plus.mean - st.unperturbed_plus);
  const double allowed = kMeanShiftFactor * sigma * sigma / p.s;
  const std::vector<double> sigmas{0.005, 0.01, 0.02, 0.04, 0.08};
  const auto vs = variance_scaling(p, sigmas, 10000, 1);
  std::uint64_t violations = st.bound_violations + st.root_count_violations;
  for (const auto& pt : vs.points) violations += pt.bound_violations + pt.root_count_violations;
  const bool slopes = std::abs(vs.minus.slope - kVarianceSlope) <= kVarianceSlopeTol &&
                      std::abs(vs.plus.slope - kVarianceSlope) <= kVarianceSlopeTol;
  Outcome o;
  o.pass = dm <= allowed && dp <= allowed && violations == 0 && slopes;
  o.detail = "|dE-| = " + fmt("%.3g", dm) + ", |dE+| = " + fmt("%.3g", dp) + " (allowed " + fmt("%.3g", allowed) +
             "); bound/root violations = " + std::to_string(violations) + "; Var slopes " + fmt("%.4f", vs.minus.slope) +
             " / " + fmt("%.4f", vs.plus.slope) + " (want 2 +- 0.1)";
  return o;
}

// ---------------------------------------------------------------------------
// 4. Many-body noise scaling.

Outcome criterion_4() {
  ModelParams base;
  base.s = 1.0;
  const std::vector<int> Ls{8, 12, 16, 20, 24};
  NoiseScalingOptions opt;
  opt.filling = 0.5;
  opt.k0_over_pi = 1.0;
  const auto rep = many_body_noise_scaling(base, 0.02, Ls, 1000, 1, opt);
  const bool slope_ok = rep.fits_valid && std::abs(rep.mean_shift_minus.slope - kNoiseSlope) <= kNoiseSlopeTol &&
                        std::abs(rep.mean_shift_plus.slope - kNoiseSlope) <= kNoiseSlopeTol;

  // c_pm against s~ at fixed L. The first-order coefficient (2 d0 d1)^2 is
  // deterministic and must approach 1 monotonically; the sampled c_pm must
  // agree with it within kCoefficientSigmas standard errors of the variance.
  std::string cs;
  const std::vector<int> L12{12};
  bool trend = true;
  double prev_gap = 2.0;
  for (double s : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    ModelParams p = base;
    p.s = s;
    const auto r = many_body_noise_scaling(p, 0.02, L12, 1000, 1, opt);
    const auto& pt = r.points.front();
    const double var_scale = 0.02 * 0.02;
    const double se_m = pt.sample_minus.variance_standard_error() / var_scale;
    const double se_p = pt.sample_plus.variance_standard_error() / var_scale;
    const double gap = std::max(std::abs(pt.c1_minus - 1.0), std::abs(pt.c1_plus - 1.0));
    trend = trend && gap < prev_gap && std::abs(pt.c_minus - pt.c1_minus) <= kCoefficientSigmas * se_m &&
            std::abs(pt.c_plus - pt.c1_plus) <= kCoefficientSigmas * se_p;
    prev_gap = gap;
    cs += fmt(" %.3f", pt.c_minus) + "/" + fmt("%.3f", pt.c_plus) + fmt("[c1 %.3f", pt.c1_minus) + fmt("/%.3f", pt.c1_plus) +
          fmt(", se %.3f]", se_m);
  }

  Outcome o;
  o.pass = slope_ok && trend;
  o.detail = "mean-shift slopes " + fmt("%.3f", rep.mean_shift_minus.slope) + " / " + fmt("%.3f", rep.mean_shift_plus.slope) +
             " (want -1.5 +- 0.2); c-/c+ at s=0.5..8:" + cs + (trend ? " (trend to 1)" : " (no trend to 1)");
  return o;
}

// ---------------------------------------------------------------------------
// Shared thermal sweeps for criteria 5, 6, 7, 9 and 10.

ThermalOptions sweep_options(int threads) {
  ThermalOptions opt;
  opt.threads = threads;
  opt.verify_normalization = true;
  return opt;
}

ModelParams headline(double s, double muc) {
  ModelParams p;
  p.L = 20;
  p.N = 10;
  p.n0 = 10;
  p.t = 1.0;
  p.s = s;
  p.s_prime = 0.01;
  p.mu_c = muc;
  return p;
}

std::vector<double> range(double a, double b, double h) {
  std::vector<double> v;
  for (int i = 0; a + i * h <= b + 1e-9; ++i) v.push_back(a + i * h);
  return v;
}

struct HeadlineRun {
  std::vector<FidelityResult> errors;       // s in [4, 5]
  std::vector<CalibrationCurve> curves;     // one per s in {4, 4.5, 5}
  std::vector<double> numbers() const {
    std::vector<double> out;
    for (const auto& r : errors) out.insert(out.end(), {r.F, r.error_rate, r.p_meas, r.e_meas, r.weight_sum, r.Z});
    for (const auto& c : curves) {
      for (const auto* v : {&c.e, &c.e_meas, &c.e_readout, &c.weight_sum}) out.insert(out.end(), v->begin(), v->end());
      out.push_back(c.mu_c_star);
    }
    return out;
  }
};

HeadlineRun headline_run(int threads) {
  HeadlineRun run;
  const auto opt = sweep_options(threads);
  for (double s : range(4.0, 5.0, 0.25)) run.errors.push_back(xgate_fidelity(headline(s, 17.0), 10, 15.0, opt));
  const auto grid = range(12.0, 22.0, 0.5);
  for (double s : {4.0, 4.5, 5.0}) run.curves.push_back(calibrate_mu_c(headline(s, 17.0), 10, 15.0, grid, opt));
  return run;
}

// 5. Headline fidelity at L=20.
Outcome criterion_5() {
  const auto run = headline_run(1);
  double worst = 0.0;
  for (const auto& r : run.errors) worst = std::max(worst, r.error_rate);
  // The calibration is gated at s = 4, the coupling of the readout study;
  // the other two curves are reported to show how the optimum moves with s.
  const auto& gate = run.curves.front();
  const bool calib = std::abs(gate.mu_c_star - 17.0) <= kCalibrationWindow && gate.e_readout[gate.argmin] < kReadoutError;
  std::string stars;
  for (const auto& c : run.curves) stars += fmt(" %.1f", c.mu_c_star) + fmt("(%.2e)", c.e_readout[c.argmin]);
  return {worst <= kHeadlineError && calib,
          "max e over s in [4,5] = " + fmt("%.3e", worst) + " (<= 1e-3); mu_c* (e_readout) at s=4,4.5,5:" + stars};
}

// 6. Error-rate envelope over L and s.
struct EnvelopeRun {
  std::vector<int> Ls;
  std::vector<double> ss;
  std::vector<double> Ts{10.0, 15.0, 20.0, 50.0};
  ErrorRateScan scan;
  double e(std::size_t li, std::size_t si, std::size_t ti) const {
    return scan.points[(li * ss.size() + si) * Ts.size() + ti].e;
  }
};

EnvelopeRun envelope_run(int threads) {
  EnvelopeRun run;
  for (int L = 6; L <= 28; L += 2) run.Ls.push_back(L);
  run.ss = range(1.0, 10.0, 0.25);
  const std::vector<double> mus{12.0};
  ModelParams base;
  base.s_prime = 0.01;
  run.scan = error_rate_scan(base, run.Ls, run.ss, mus, run.Ts, 1.0, sweep_options(threads));
  return run;
}

Outcome criterion_6() {
  const auto run = envelope_run(1);
  // (a) per curve: strictly decreasing up to the floor, with a drop of at least kMinimumDrop.
  int steep_fail = 0, curves = 0;
  for (std::size_t li = 0; li < run.Ls.size(); ++li)
    for (std::size_t ti = 0; ti < run.Ts.size(); ++ti) {
      ++curves;
      double mn = 1.0;
      for (std::size_t si = 0; si < run.ss.size(); ++si) mn = std::min(mn, run.e(li, si, ti));
      std::size_t floor = 0;
      while (floor < run.ss.size() && run.e(li, floor, ti) > kFloorFactor * mn) ++floor;
      bool ok = floor > 0 && run.e(li, 0, ti) >= kMinimumDrop * run.e(li, floor, ti);
      for (std::size_t si = 0; si < floor; ++si) ok = ok && run.e(li, si + 1, ti) < run.e(li, si, ti);
      if (!ok) ++steep_fail;
    }
  // (b) per neighbouring pair: larger L is better at the smallest s and worse at the largest s.
  int order_fail = 0, pairs = 0;
  for (std::size_t ti = 0; ti < run.Ts.size(); ++ti)
    for (std::size_t li = 0; li + 1 < run.Ls.size(); ++li) {
      ++pairs;
      const bool below = run.e(li + 1, 0, ti) < run.e(li, 0, ti);
      const std::size_t last = run.ss.size() - 1;
      const bool above = run.e(li + 1, last, ti) > run.e(li, last, ti);
      if (!(below && above)) ++order_fail;
    }
  return {steep_fail == 0 && order_fail == 0,
          "steep-drop failures " + std::to_string(steep_fail) + "/" + std::to_string(curves) +
              "; L-order reversal failures " + std::to_string(order_fail) + "/" + std::to_string(pairs) + "; " +
              std::to_string(run.scan.crossings.size()) + " crossings located"};
}

// 7. Measurement shift.
struct ShiftRun {
  MeasurementSim small;
  FidelityResult small_fid;
  FidelityResult large;
};

ShiftRun shift_run(int threads) {
  ShiftRun run;
  ModelParams p;
  p.L = 10;
  p.n0 = 5;
  p.s = 4.0;
  p.s_prime = 0.01;
  p.mu_c = 12.0;
  run.small_fid = xgate_fidelity(p, 5, 10.0, sweep_options(threads));
  run.small = simulate_from_probabilities(run.small_fid.F, run.small_fid.p_meas, 10.0, 1000, 1000, 1, threads);
  run.large = xgate_fidelity(headline(4.0, 17.0), 10, 15.0, sweep_options(threads));
  return run;
}

Outcome criterion_7() {
  const auto run = shift_run(1);
  const auto& sim = run.small;
  const bool consistent = std::abs(sim.shift - sim.expected_shift) <= kShiftSigmas * sim.standard_error;
  const bool magnitude = std::abs(sim.shift - kShiftTarget) <= kShiftTargetTol;
  const double large_shift = run.large.p_meas - run.large.F;
  const bool large_ok = large_shift < kShiftLarge;
  return {consistent && magnitude && large_ok,
          "L=10 shift " + fmt("%.3e", sim.shift) + " vs p_meas-F " + fmt("%.3e", sim.expected_shift) + " (SE " +
              fmt("%.2e", sim.standard_error) + (consistent ? ", consistent" : ", inconsistent") + "); target 3e-3 +- 2e-3 " +
              (magnitude ? "met" : "missed") + "; L=20 p_meas-F " + fmt("%.3e", large_shift) + " (< 1e-3)"};
}

// 8. Toy coupling model.
Outcome criterion_8() {
  const OscillatorParams osc;
  bool increasing = true;
  double prev = 0.0;
  int points = 0;
  for (double u = std::log10(0.5); u <= std::log10(20.0) + 1e-12; u += (std::log10(20.0) - std::log10(0.5)) / 39.0) {
    const auto o = optimize_distance(std::pow(10.0, u) * 1e-9, osc);
    increasing = increasing && o.a_opt > prev;
    prev = o.a_opt;
    ++points;
  }
  const auto one = optimize_distance(1e-9, osc);
  const bool window = one.r_opt >= kRatioLow && one.r_opt <= kRatioHigh;
  return {increasing && window, std::string("a_opt ") + (increasing ? "strictly increasing" : "not monotone") + " over " +
                                    std::to_string(points) + " spreads in [0.5, 20] nm; r(a_opt, 1 nm) = " +
                                    fmt("%.4g", one.r_opt) + " at a_opt = " + fmt("%.4g", one.a_opt * 1e9) +
                                    " nm (window [5e3, 5e4])"};
}

// 9. Inequalities over the sweeps of criteria 5 to 7.
Outcome criterion_9() {
  double worst_norm = 0.0;
  double worst_excess = -1.0;  // max of F - p_meas
  std::size_t checked = 0;
  auto check = [&](double F, double pm, double wsum) {
    worst_norm = std::max(worst_norm, std::abs(wsum - 1.0));
    worst_excess = std::max(worst_excess, F - pm);
    ++checked;
  };
  const auto h = headline_run(1);
  for (const auto& r : h.errors) check(r.F, r.p_meas, r.weight_sum);
  for (const auto& c : h.curves)
    for (std::size_t i = 0; i < c.e.size(); ++i) check(1.0 - c.e[i], 1.0 - c.e_meas[i], c.weight_sum[i]);
  const auto env = envelope_run(1);
  for (const auto& pt : env.scan.points) check(1.0 - pt.e, pt.p_meas, pt.weight_sum);
  const auto sh = shift_run(1);
  check(sh.large.F, sh.large.p_meas, sh.large.weight_sum);
  check(sh.small_fid.F, sh.small_fid.p_meas, sh.small_fid.weight_sum);
  return {worst_norm <= kNormalizationTol && worst_excess <= kInequalitySlack,
          std::to_string(checked) + " points; max |sum w - 1| = " + fmt("%.2e", worst_norm) + "; max(F - p_meas) = " +
              fmt("%.2e", worst_excess)};
}

// 10. Thread-count independence of the criterion-5 run.
Outcome criterion_10() {
  const auto a = headline_run(1).numbers();
  const auto b = headline_run(8).numbers();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return {a.size() == b.size() && worst <= kThreadTol,
          std::to_string(a.size()) + " numbers; max |1 thread - 8 threads| = " + fmt("%.2e", worst)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria 1-10"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> criteria{criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                                       criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
  int failures = 0;
  for (int i = 1; i <= 10; ++i) {
    if (only != 0 && i != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d: %s | %s | %.1f s\n", i, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
