// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "bhw/errors.hpp"
#include "bhw/fs_stream.hpp"
#include "bhw/parallel.hpp"
#include "bhw/qubit.hpp"
#include "bhw/random.hpp"
#include "bhw/stats.hpp"
#include "bhw/units.hpp"

namespace bhw {

/// Boltzmann weights over an explicit list of energies.
/// `weights[i]` belongs to `energies[i]`; energies are measured from the minimum.
struct ThermalEnsemble {
  double T_mK = 0.0;
  double beta = 0.0;
  double ground_energy = 0.0;
  double Z = 0.0;  // sum of exp(-beta (E - E_gs))
  std::vector<double> weights;
  double weight_sum = 0.0;
};

inline ThermalEnsemble thermal_weights(std::span<const double> energies, double T_mK, const UnitSystem& units = {}) {
  if (energies.empty()) fail(ErrorKind::InvalidParameter, "thermal weights need a non-empty spectrum");
  ThermalEnsemble ens;
  ens.T_mK = T_mK;
  ens.beta = beta(T_mK, units);
  ens.ground_energy = *std::min_element(energies.begin(), energies.end());
  ens.weights.resize(energies.size());
  CompensatedSum z;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    ens.weights[i] = std::exp(-ens.beta * (energies[i] - ens.ground_energy));
    z.add(ens.weights[i]);
  }
  ens.Z = z.value();
  CompensatedSum total;
  for (auto& w : ens.weights) {
    w /= ens.Z;
    total.add(w);
  }
  ens.weight_sum = total.value();
  return ens;
}

struct ThermalOptions {
  UnitSystem units{};
  FsStrategy strategy = FsStrategy::EnergyClasses;
  int threads = 1;
  std::size_t chunk = 1024;
  /// Keep per-(mu, nu) fidelity terms; requires the per-determinant strategy.
  bool keep_contributions = false;
  /// Re-visit all states once more and sum the normalized weights directly.
  bool verify_normalization = false;
};

struct FidelityContribution {
  std::uint64_t mu = 0;
  int nu = 0;
  double energy = 0.0;
  double overlap = 0.0;  // |w~+^* v+ + w~-^* v-|^2
  double value = 0.0;    // weighted and normalized term of F
};

/// Thermal X-gate quantities at one temperature for filling N.
struct FidelityResult {
  double T_mK = 0.0;
  double beta = 0.0;
  double F = 0.0;
  double error_rate = 0.0;
  double p_meas = 0.0;
  double e_meas = 0.0;
  double Z = 0.0;
  double ground_energy = 0.0;
  double state_count = 0.0;
  /// Sum of the normalized weights from an independent pass; NaN unless requested.
  double weight_sum = std::numeric_limits<double>::quiet_NaN();
  std::vector<FidelityContribution> contributions;
};

namespace detail {

/// Partial sums relative to a running reference energy, one slot per temperature.
struct ThermalAccumulator {
  double ref = std::numeric_limits<double>::infinity();
  std::vector<CompensatedSum> z, f, p;
  double states = 0.0;
  std::vector<FidelityContribution> contributions;

  explicit ThermalAccumulator(std::size_t temps = 0) : z(temps), f(temps), p(temps) {}

  void rebase(double new_ref, std::span<const double> betas) {
    if (!(new_ref < ref)) return;
    if (std::isfinite(ref)) {
      for (std::size_t i = 0; i < betas.size(); ++i) {
        const double factor = std::exp(-betas[i] * (ref - new_ref));
        z[i].scale(factor);
        f[i].scale(factor);
        p[i].scale(factor);
      }
    }
    ref = new_ref;
  }

  /// Adds one eigenstate with degeneracy g; `fid` and `meas` are its overlaps.
  void add(double energy, double g, double fid, double meas, std::span<const double> betas) {
    if (energy < ref) rebase(energy, betas);
    states += g;
    for (std::size_t i = 0; i < betas.size(); ++i) {
      const double b = g * std::exp(-betas[i] * (energy - ref));
      z[i].add(b);
      if (fid != 0.0) f[i].add(b * fid);
      if (meas != 0.0) p[i].add(b * meas);
    }
  }

  void merge(const ThermalAccumulator& other, std::span<const double> betas) {
    if (!std::isfinite(other.ref)) return;
    rebase(other.ref, betas);
    for (std::size_t i = 0; i < betas.size(); ++i) {
      const double factor = std::exp(-betas[i] * (other.ref - ref));
      CompensatedSum oz = other.z[i], of = other.f[i], op = other.p[i];
      oz.scale(factor);
      of.scale(factor);
      op.scale(factor);
      z[i].add(oz);
      f[i].add(of);
      p[i].add(op);
    }
    states += other.states;
    contributions.insert(contributions.end(), other.contributions.begin(), other.contributions.end());
  }
};

/// The four background streams of an N-particle problem laid end to end.
struct SectorStreams {
  std::vector<FsStream> streams;
  std::vector<std::size_t> offsets;  // offsets[n] = first global index of sector n
  std::size_t total = 0;

  SectorStreams(const ModelParams& p, const MomentumGrid& grid, FsStrategy strategy) {
    for (int n_k0 = 0; n_k0 <= 3; ++n_k0) {
      streams.emplace_back(grid, p.t, p.N - n_k0, strategy);
      offsets.push_back(total);
      total += streams.back().size();
    }
    offsets.push_back(total);
  }

  /// Calls f(n_k0, term) for every term with global index in [begin, end).
  template <class F>
  void visit(std::size_t begin, std::size_t end, F&& f) const {
    for (int n = 0; n <= 3; ++n) {
      const std::size_t lo = std::max(begin, offsets[n]);
      const std::size_t hi = std::min(end, offsets[n + 1]);
      if (lo >= hi) continue;
      streams[n].visit(lo - offsets[n], hi - offsets[n], [&](const FsTerm& term) { f(n, term); });
    }
  }
};

inline double fidelity_overlap(const SmallVector<double, 3>& v, const SmallVector<double, 3>& w) {
  // v = (v0, v+, v-), w = (w-, w+, w2); c_c^dag maps |0,+-> onto |1,+->.
  const double amp = w[1] * v[1] + w[0] * v[2];
  return amp * amp;
}

/// Overlap with the lowest eigenspace of the target block. When the lowest
/// level is degenerate the whole eigenspace is the target, which keeps F
/// independent of the arbitrary basis chosen inside it.
inline double target_overlap(const SmallVector<double, 3>& v, const SmallEigen<double, 3>& target) {
  double f = 0.0;
  for (int j = 0; j < 3; ++j) {
    if (j > 0 && !levels_degenerate(target.values[0], target.values[j])) break;
    f += fidelity_overlap(v, target.vectors[j]);
  }
  return f;
}

}  // namespace detail

/// F(T), p_meas(T) and Z(T) for every temperature in `temps`, at filling p.N.
///
/// All N-particle eigenstates are streamed once. Sector-1 states are paired
/// with the lower eigenvector of the (N+1)-particle sector-2 block that has
/// the same background, which is the target of the control excitation.
inline std::vector<FidelityResult> fidelity_scan(const ModelParams& p, std::span<const double> temps,
                                                 const ThermalOptions& opt = {}) {
  p.validate(true);
  if (p.N + 1 > p.L + 2) fail(ErrorKind::InvalidFilling, "fidelity needs filling N+1 <= L+2");
  if (temps.empty()) fail(ErrorKind::InvalidParameter, "temperature list is empty");
  if (opt.keep_contributions && opt.strategy != FsStrategy::PerDeterminant) {
    fail(ErrorKind::InvalidParameter, "per-(mu, nu) contributions need the per-determinant strategy");
  }
  std::vector<double> betas;
  for (double T : temps) betas.push_back(beta(T, opt.units));

  const MomentumGrid grid(p.L, p.n0);
  const BlockKernel kernel(p);
  const detail::SectorStreams sectors(p, grid, opt.strategy);

  auto body = [&](detail::ThermalAccumulator& acc, std::size_t begin, std::size_t end) {
    sectors.visit(begin, end, [&](int n_k0, const FsTerm& term) {
      const double e = term.energy;
      const double g = term.weight;
      switch (n_k0) {
        case 0:
          acc.add(kernel.sector0(e), g, 0.0, 1.0, betas);
          break;
        case 3:
          acc.add(kernel.sector3(e), g, 0.0, 0.0, betas);
          break;
        case 1: {
          const auto b = kernel.k0(e);
          const auto eig = eigh3_real(kernel.sector1(e, b));
          const auto target = eigh3_real(kernel.sector2(e, b));
          for (int nu = 0; nu < 3; ++nu) {
            const auto& v = eig.vectors[nu];
            const double fid = detail::target_overlap(v, target);
            const double meas = v[1] * v[1] + v[2] * v[2];
            acc.add(eig.values[nu], g, fid, meas, betas);
            if (opt.keep_contributions) acc.contributions.push_back({term.index, nu, eig.values[nu], fid, 0.0});
          }
          break;
        }
        case 2: {
          const auto b = kernel.k0(e);
          const auto eig = eigh3_real(kernel.sector2(e, b));
          for (int nu = 0; nu < 3; ++nu) {
            const auto& w = eig.vectors[nu];
            acc.add(eig.values[nu], g, 0.0, w[2] * w[2], betas);
          }
          break;
        }
      }
    });
  };
  auto merge = [&](detail::ThermalAccumulator& a, const detail::ThermalAccumulator& b) { a.merge(b, betas); };
  const auto acc = chunked_fold(sectors.total, opt.chunk, opt.threads, detail::ThermalAccumulator(temps.size()), body, merge);

  std::vector<FidelityResult> out(temps.size());
  for (std::size_t i = 0; i < temps.size(); ++i) {
    auto& r = out[i];
    r.T_mK = temps[i];
    r.beta = betas[i];
    r.ground_energy = acc.ref;
    r.Z = acc.z[i].value();
    r.F = acc.f[i].value() / r.Z;
    r.p_meas = acc.p[i].value() / r.Z;
    r.error_rate = 1.0 - r.F;
    r.e_meas = 1.0 - r.p_meas;
    r.state_count = acc.states;
    if (opt.keep_contributions) {
      r.contributions = acc.contributions;
      for (auto& c : r.contributions) c.value = std::exp(-r.beta * (c.energy - r.ground_energy)) * c.overlap / r.Z;
    }
  }

  if (opt.verify_normalization) {
    struct WeightSums {
      std::vector<CompensatedSum> w;
    };
    auto check_body = [&](WeightSums& acc2, std::size_t begin, std::size_t end) {
      auto add = [&](double energy, double g) {
        for (std::size_t i = 0; i < out.size(); ++i) {
          acc2.w[i].add(g * std::exp(-out[i].beta * (energy - out[i].ground_energy)) / out[i].Z);
        }
      };
      sectors.visit(begin, end, [&](int n_k0, const FsTerm& term) {
        const double e = term.energy;
        if (n_k0 == 0) {
          add(kernel.sector0(e), term.weight);
        } else if (n_k0 == 3) {
          add(kernel.sector3(e), term.weight);
        } else {
          const auto b = kernel.k0(e);
          const auto eig = eigh3_real(n_k0 == 1 ? kernel.sector1(e, b) : kernel.sector2(e, b));
          for (double ev : eig.values) add(ev, term.weight);
        }
      });
    };
    auto check_merge = [](WeightSums& a, const WeightSums& b) {
      for (std::size_t i = 0; i < a.w.size(); ++i) a.w[i].add(b.w[i]);
    };
    const auto sums = chunked_fold(sectors.total, opt.chunk, opt.threads,
                                   WeightSums{std::vector<CompensatedSum>(out.size())}, check_body, check_merge);
    for (std::size_t i = 0; i < out.size(); ++i) out[i].weight_sum = sums.w[i].value();
  }
  return out;
}

inline FidelityResult xgate_fidelity(ModelParams p, int N, double T_mK, const ThermalOptions& opt = {}) {
  p.N = N;
  const double temps[] = {T_mK};
  return fidelity_scan(p, temps, opt).front();
}

inline double measurement_probability(ModelParams p, int N, double T_mK, const ThermalOptions& opt = {}) {
  return xgate_fidelity(p, N, T_mK, opt).p_meas;
}

/// One row of an error-rate sweep.
struct ErrorRatePoint {
  int L = 0;
  int N = 0;
  int n0 = 0;
  double s = 0.0;
  double mu_c = 0.0;
  double T_mK = 0.0;
  double e = 0.0;
  double p_meas = 0.0;
  double e_meas = 0.0;
  double weight_sum = std::numeric_limits<double>::quiet_NaN();
};

/// Grid-level intersection of the error curves of two ring sizes.
struct CrossingPoint {
  double T_mK = 0.0;
  double mu_c = 0.0;
  int L_a = 0;
  int L_b = 0;
  double s_c = 0.0;
};

struct ErrorRateScan {
  std::vector<ErrorRatePoint> points;
  std::vector<CrossingPoint> crossings;
};

/// Index of k0 = fraction * pi on a ring of L sites; throws if it is not a grid point.
inline int n0_for_fraction(int L, double k0_over_pi) {
  const double n = k0_over_pi * L / 2.0;
  const double r = std::round(n);
  if (std::abs(n - r) > 1e-9) {
    fail(ErrorKind::InvalidGeometry, "k0 = " + std::to_string(k0_over_pi) + " pi is not on the grid of L=" + std::to_string(L));
  }
  const int n0 = static_cast<int>(r) % L;
  return n0 < 0 ? n0 + L : n0;
}

/// Crossing abscissae where e(s; L_a) - e(s; L_b) changes sign, located by
/// linear interpolation of log e between neighbouring grid points.
inline std::vector<double> curve_crossings(std::span<const double> s, std::span<const double> ea,
                                           std::span<const double> eb) {
  std::vector<double> out;
  auto diff = [&](std::size_t i) { return std::log(std::max(ea[i], 1e-300)) - std::log(std::max(eb[i], 1e-300)); };
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double d0 = diff(i), d1 = diff(i + 1);
    if (d0 == 0.0) {
      out.push_back(s[i]);
    } else if ((d0 < 0.0) != (d1 < 0.0) && d1 != 0.0) {
      out.push_back(s[i] + (s[i + 1] - s[i]) * d0 / (d0 - d1));
    }
  }
  return out;
}

/// e(T) over (L, s, mu_c) at half filling N = L/2 with k0 = k0_over_pi * pi.
inline ErrorRateScan error_rate_scan(const ModelParams& base, std::span<const int> Ls, std::span<const double> ss,
                                     std::span<const double> mucs, std::span<const double> temps,
                                     double k0_over_pi, const ThermalOptions& opt = {}) {
  if (Ls.empty() || ss.empty() || mucs.empty() || temps.empty()) {
    fail(ErrorKind::InvalidParameter, "error-rate scan needs non-empty L, s, mu_c and T lists");
  }
  ErrorRateScan scan;
  for (int L : Ls) {
    if (L % 2 != 0) fail(ErrorKind::InvalidFilling, "half filling needs even L, got " + std::to_string(L));
    for (double muc : mucs) {
      for (double s : ss) {
        ModelParams p = base;
        p.L = L;
        p.N = L / 2;
        p.n0 = n0_for_fraction(L, k0_over_pi);
        p.s = s;
        p.mu_c = muc;
        const auto res = fidelity_scan(p, temps, opt);
        for (const auto& r : res) {
          scan.points.push_back({L, p.N, p.n0, s, muc, r.T_mK, r.error_rate, r.p_meas, r.e_meas, r.weight_sum});
        }
      }
    }
  }
  // Curves are stored L-major, then mu_c, then s, then T.
  auto at = [&](std::size_t li, std::size_t mi, std::size_t si, std::size_t ti) {
    return scan.points[((li * mucs.size() + mi) * ss.size() + si) * temps.size() + ti].e;
  };
  for (std::size_t ti = 0; ti < temps.size(); ++ti) {
    for (std::size_t mi = 0; mi < mucs.size(); ++mi) {
      for (std::size_t li = 0; li + 1 < Ls.size(); ++li) {
        std::vector<double> ea, eb;
        for (std::size_t si = 0; si < ss.size(); ++si) {
          ea.push_back(at(li, mi, si, ti));
          eb.push_back(at(li + 1, mi, si, ti));
        }
        for (double sc : curve_crossings(ss, ea, eb)) scan.crossings.push_back({temps[ti], mucs[mi], Ls[li], Ls[li + 1], sc});
      }
    }
  }
  return scan;
}

/// Binomial readout experiment built on p_meas and compared against Binomial(M, F).
struct MeasurementSim {
  std::uint64_t M = 0;
  std::uint64_t K = 0;
  std::uint64_t seed = 0;
  double T_mK = 0.0;
  double F = 0.0;
  double p_meas = 0.0;
  std::vector<std::uint64_t> counts;        // N_1 per ensemble member
  std::vector<double> empirical;            // fraction of members with N_1 = n, n = 0..M
  std::vector<double> theoretical;          // Binomial(M, F) pmf, n = 0..M
  double empirical_mean = 0.0;              // mean of N_1 / M
  double theoretical_mean = 0.0;            // F
  double shift = 0.0;                       // empirical_mean - theoretical_mean
  double expected_shift = 0.0;              // p_meas - F
  double standard_error = 0.0;              // sqrt(p_meas (1 - p_meas) / (M K))
};

inline std::vector<double> binomial_pmf(std::uint64_t M, double p) {
  std::vector<double> pmf(M + 1, 0.0);
  if (p <= 0.0) {
    pmf[0] = 1.0;
    return pmf;
  }
  if (p >= 1.0) {
    pmf[M] = 1.0;
    return pmf;
  }
  const double lp = std::log(p), lq = std::log1p(-p);
  const double lm = std::lgamma(static_cast<double>(M) + 1.0);
  for (std::uint64_t n = 0; n <= M; ++n) {
    const double dn = static_cast<double>(n);
    pmf[n] = std::exp(lm - std::lgamma(dn + 1.0) - std::lgamma(static_cast<double>(M - n) + 1.0) + dn * lp +
                      static_cast<double>(M - n) * lq);
  }
  return pmf;
}

/// Samples the readout protocol from precomputed F and p_meas.
inline MeasurementSim simulate_from_probabilities(double F, double p_meas, double T_mK, std::uint64_t M, std::uint64_t K,
                                                  std::uint64_t seed, int threads = 1) {
  if (M < 1 || K < 1) fail(ErrorKind::InvalidParameter, "M and K must be >= 1");
  MeasurementSim sim;
  sim.M = M;
  sim.K = K;
  sim.seed = seed;
  sim.T_mK = T_mK;
  sim.F = F;
  sim.p_meas = p_meas;
  sim.counts = parallel_map<std::uint64_t>(K, threads, [&](std::size_t k) {
    auto rng = derive_stream(seed, StreamPurpose::Measurement, k);
    return rng.binomial(M, p_meas);
  });
  sim.empirical.assign(M + 1, 0.0);
  CompensatedSum total;
  for (auto c : sim.counts) {
    sim.empirical[c] += 1.0;
    total.add(static_cast<double>(c));
  }
  for (auto& h : sim.empirical) h /= static_cast<double>(K);
  sim.theoretical = binomial_pmf(M, F);
  sim.empirical_mean = total.value() / static_cast<double>(M * K);
  sim.theoretical_mean = F;
  sim.shift = sim.empirical_mean - sim.theoretical_mean;
  sim.expected_shift = p_meas - F;
  sim.standard_error = std::sqrt(p_meas * (1.0 - p_meas) / static_cast<double>(M * K));
  return sim;
}

inline MeasurementSim simulate_measurements(ModelParams p, int N, double T_mK, std::uint64_t M, std::uint64_t K,
                                            std::uint64_t seed, const ThermalOptions& opt = {}) {
  const auto fid = xgate_fidelity(p, N, T_mK, opt);
  return simulate_from_probabilities(fid.F, fid.p_meas, T_mK, M, K, seed, opt.threads);
}

/// e, e_meas and the readout calibration function over a mu_c grid.
struct CalibrationCurve {
  double T_mK = 0.0;
  std::vector<double> mu_c;
  std::vector<double> e;
  std::vector<double> e_meas;
  std::vector<double> e_readout;
  std::vector<double> weight_sum;
  std::size_t argmin = 0;
  double mu_c_star = 0.0;
};

inline double readout_error(double e, double e_meas) { return std::sqrt(std::abs(e - e_meas) * e); }

inline CalibrationCurve calibrate_mu_c(ModelParams p, int N, double T_mK, std::span<const double> grid,
                                       const ThermalOptions& opt = {}) {
  if (grid.empty()) fail(ErrorKind::InvalidParameter, "mu_c grid is empty");
  CalibrationCurve c;
  c.T_mK = T_mK;
  for (double muc : grid) {
    p.mu_c = muc;
    const auto r = xgate_fidelity(p, N, T_mK, opt);
    c.mu_c.push_back(muc);
    c.e.push_back(r.error_rate);
    c.e_meas.push_back(r.e_meas);
    c.e_readout.push_back(readout_error(r.error_rate, r.e_meas));
    c.weight_sum.push_back(r.weight_sum);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double a = c.e_readout[i], b = c.e_readout[best];
    if (a < b || (a == b && c.mu_c[i] < c.mu_c[best])) best = i;
  }
  c.argmin = best;
  c.mu_c_star = c.mu_c[best];
  return c;
}

}  // namespace bhw
