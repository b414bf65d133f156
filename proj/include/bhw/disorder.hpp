// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bhw/errors.hpp"
#include "bhw/model.hpp"
#include "bhw/parallel.hpp"
#include "bhw/random.hpp"
#include "bhw/stats.hpp"
#include "bhw/wheel.hpp"

namespace bhw {

/// Gaussian imperfections of the ring-to-center hoppings, s -> s + delta_j.
struct DisorderRealization {
  std::vector<double> deltas;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
};

/// Draws L i.i.d. N(0, sigma^2) values from stream `index` of `seed`.
inline DisorderRealization sample_disorder(double sigma, int L, std::uint64_t seed, std::uint64_t index = 0) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) fail(ErrorKind::InvalidParameter, "sigma must be >= 0");
  if (L < 3) fail(ErrorKind::InvalidGeometry, "L must be >= 3");
  DisorderRealization r;
  r.sigma = sigma;
  r.seed = seed;
  r.index = index;
  r.deltas.resize(L);
  auto rng = derive_stream(seed, StreamPurpose::Disorder, index);
  for (auto& d : r.deltas) d = sigma * rng.normal();
  return r;
}

/// Fourier transformed couplings f_k = delta_{k,k0} + L^{-1/2} sum_j (delta_j / s~) e^{i (k0 - k) j},
/// indexed by grid position n.
struct FourierCouplings {
  std::vector<Complex> f;
  double expected_std = 0.0;  // sigma / s~, the ensemble standard deviation of each f_k

  double weight(int n) const { return std::norm(f[n]); }
};

inline FourierCouplings fourier_couplings(const DisorderRealization& r, const ModelParams& p) {
  const int L = p.L;
  if (static_cast<int>(r.deltas.size()) != L) fail(ErrorKind::InvalidParameter, "realization length differs from L");
  const double st = p.s_tilde();
  if (!(st > 0.0)) fail(ErrorKind::InvalidParameter, "Fourier couplings need s~ > 0");
  FourierCouplings c;
  c.f.assign(L, Complex(0.0));
  c.expected_std = r.sigma / st;
  const double norm = 1.0 / (std::sqrt(static_cast<double>(L)) * st);
  for (int n = 0; n < L; ++n) {
    Complex acc(0.0);
    for (int j = 0; j < L; ++j) {
      if (r.deltas[j] == 0.0) continue;
      // Reduce the phase index modulo L before converting to an angle.
      const long idx = ((static_cast<long>(p.n0 - n) * j) % L + L) % L;
      acc += r.deltas[j] * std::polar(1.0, kTwoPi * static_cast<double>(idx) / L);
    }
    c.f[n] = acc * norm;
  }
  c.f[p.n0] += 1.0;
  return c;
}

/// Distinct ring energies with their total coupling weight sum |f_k|^2.
struct Pole {
  double energy = 0.0;
  double weight = 0.0;
  int multiplicity = 0;
};

inline std::vector<Pole> coupling_poles(const FourierCouplings& c, const ModelParams& p) {
  const MomentumGrid grid(p.L, p.n0);
  std::map<int, Pole> by_label;
  for (int n = 0; n < p.L; ++n) {
    auto& pole = by_label[grid.canonical_index(n)];
    pole.energy = grid.dispersion(n, p.t);
    pole.weight += c.weight(n);
    pole.multiplicity += 1;
  }
  std::vector<Pole> out;
  for (auto& [label, pole] : by_label) out.push_back(pole);
  std::sort(out.begin(), out.end(), [](const Pole& a, const Pole& b) { return a.energy < b.energy; });
  return out;
}

/// g(E) = sum_k |f_k|^2 / (E + 2 t cos k). Single-particle energies satisfy E = s~^2 g(E).
inline double g_function(double E, const FourierCouplings& c, const ModelParams& p) {
  const MomentumGrid grid(p.L, p.n0);
  double g = 0.0;
  for (int n = 0; n < p.L; ++n) {
    const double w = c.weight(n);
    if (w == 0.0) continue;
    const double d = E - grid.dispersion(n, p.t);
    if (std::abs(d) < 1e-12) fail(ErrorKind::Pole, "E=" + std::to_string(E) + " sits on the pole of k index " + std::to_string(n));
    g += w / d;
  }
  return g;
}

struct MarginalBounds {
  double minus_lower = 0.0;
  double minus_upper = 0.0;
  double plus_lower = 0.0;
  double plus_upper = 0.0;
};

/// Outer bounds use sum_k |f_k|^2; inner bounds are evaluated at k = k0.
inline MarginalBounds marginal_bounds(const FourierCouplings& c, const ModelParams& p) {
  if (!(p.s_tilde() > 0.0)) fail(ErrorKind::InvalidParameter, "bounds need s~ > 0");
  const double st2 = p.s_tilde() * p.s_tilde();
  double total = 0.0;
  for (int n = 0; n < p.L; ++n) total += c.weight(n);
  const double at = std::abs(p.t);
  const double tc = p.t * std::cos(p.k0());
  const double fk0 = c.weight(p.n0);
  MarginalBounds b;
  b.minus_lower = -at - std::sqrt(p.t * p.t + st2 * total);
  b.minus_upper = -tc - std::sqrt(tc * tc + st2 * fk0);
  b.plus_lower = -tc + std::sqrt(tc * tc + st2 * fk0);
  b.plus_upper = at + std::sqrt(p.t * p.t + st2 * total);
  return b;
}

struct RootInterval {
  double lo = 0.0;
  double hi = 0.0;
  double root = 0.0;
};

/// Solutions of E = s~^2 g(E).
struct MarginalSolution {
  double E_minus = 0.0;
  double E_plus = 0.0;
  std::vector<RootInterval> interior;  // one root between each pair of coupled poles
  std::vector<Pole> pole_levels;       // eigenvalues pinned to a pole, with their multiplicity
  MarginalBounds bounds;
  double max_residual = 0.0;
  int max_iterations = 0;

  std::size_t root_count() const { return interior.size() + 2; }

  /// Full single-particle spectrum (L + 1 values, ascending).
  std::vector<double> spectrum() const {
    std::vector<double> out{E_minus, E_plus};
    for (const auto& r : interior) out.push_back(r.root);
    for (const auto& pole : pole_levels)
      for (int i = 0; i < pole.multiplicity; ++i) out.push_back(pole.energy);
    std::sort(out.begin(), out.end());
    return out;
  }
};

namespace detail {

/// Residual h(E) = E - s~^2 g(E) restricted to the coupled poles; strictly increasing between them.
struct SecularFunction {
  std::vector<Pole> poles;  // coupled poles only
  double st2 = 0.0;

  double operator()(double E) const {
    double g = 0.0;
    for (const auto& p : poles) g += p.weight / (E - p.energy);
    return E - st2 * g;
  }
};

struct BisectionResult {
  double root = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

inline BisectionResult bisect(const SecularFunction& h, double lo, double hi, const std::string& where) {
  double flo = h(lo), fhi = h(hi);
  if (flo > 0.0 || fhi < 0.0) {
    fail(ErrorKind::SolverFailure, "no sign change on " + where + " [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                       "], h=" + std::to_string(flo) + ", " + std::to_string(fhi));
  }
  int it = 0;
  for (; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket collapsed to adjacent doubles
    const double fm = h(mid);
    if (fm == 0.0) {
      lo = hi = mid;
      flo = fhi = 0.0;
      break;
    }
    if (fm < 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  if (it == 200) fail(ErrorKind::SolverFailure, "bisection on " + where + " did not converge in 200 iterations");
  BisectionResult r;
  if (std::abs(flo) <= std::abs(fhi)) {
    r.root = lo;
    r.residual = std::abs(flo);
  } else {
    r.root = hi;
    r.residual = std::abs(fhi);
  }
  r.iterations = it;
  return r;
}

/// Moves `offset` away from a pole until h has the wanted sign, so roots
/// closer to a pole than the nominal 1e-10 are still bracketed.
inline double pole_side(const SecularFunction& h, double pole, int direction, bool want_positive) {
  double offset = 1e-10;
  for (int i = 0; i < 40; ++i) {
    const double x = pole + direction * offset * std::max(1.0, std::abs(pole));
    if (x == pole) break;
    const double v = h(x);
    if ((v > 0.0) == want_positive && v != 0.0) return x;
    offset *= 0.1;
  }
  return pole + direction * std::max(1.0, std::abs(pole)) * 1e-300;
}

}  // namespace detail

/// All roots of E = s~^2 g(E) by bisection, plus the levels pinned to poles.
inline MarginalSolution solve_marginals(const FourierCouplings& c, const ModelParams& p) {
  if (!(p.s_tilde() > 0.0)) fail(ErrorKind::InvalidParameter, "solve_marginals needs s~ > 0");
  MarginalSolution sol;
  sol.bounds = marginal_bounds(c, p);
  detail::SecularFunction h;
  h.st2 = p.s_tilde() * p.s_tilde();
  for (const auto& pole : coupling_poles(c, p)) {
    const bool coupled = pole.weight > 0.0;
    if (coupled) h.poles.push_back(pole);
    const int pinned = coupled ? pole.multiplicity - 1 : pole.multiplicity;
    if (pinned > 0) sol.pole_levels.push_back({pole.energy, 0.0, pinned});
  }
  if (h.poles.empty()) fail(ErrorKind::SolverFailure, "no coupled pole");

  auto record = [&](const detail::BisectionResult& r) {
    sol.max_residual = std::max(sol.max_residual, r.residual);
    sol.max_iterations = std::max(sol.max_iterations, r.iterations);
  };

  // Lower marginal: below the lowest coupled pole. The outer bound is a valid
  // lower end; the wider fallback only matters if rounding breaks the sign.
  {
    const double pole = h.poles.front().energy;
    double lo = std::min(sol.bounds.minus_lower, pole) - 1e-9 * std::max(1.0, std::abs(sol.bounds.minus_lower));
    if (h(lo) > 0.0) lo = pole - 2.0 * (std::abs(sol.bounds.minus_lower) + 1.0);
    const double hi = std::min(sol.bounds.minus_upper + 1e-9 * std::max(1.0, std::abs(sol.bounds.minus_upper)),
                               detail::pole_side(h, pole, -1, true));
    const double hi_safe = h(hi) >= 0.0 ? hi : detail::pole_side(h, pole, -1, true);
    const auto r = detail::bisect(h, lo, hi_safe, "E_minus interval");
    sol.E_minus = r.root;
    record(r);
  }
  for (std::size_t i = 0; i + 1 < h.poles.size(); ++i) {
    const double a = h.poles[i].energy, b = h.poles[i + 1].energy;
    const double lo = detail::pole_side(h, a, +1, false);
    const double hi = detail::pole_side(h, b, -1, true);
    const auto r = detail::bisect(h, lo, hi, "interval " + std::to_string(i));
    sol.interior.push_back({a, b, r.root});
    record(r);
  }
  {
    const double pole = h.poles.back().energy;
    double hi = std::max(sol.bounds.plus_upper, pole) + 1e-9 * std::max(1.0, std::abs(sol.bounds.plus_upper));
    if (h(hi) < 0.0) hi = pole + 2.0 * (std::abs(sol.bounds.plus_upper) + 1.0);
    const double lo0 = std::max(sol.bounds.plus_lower - 1e-9 * std::max(1.0, std::abs(sol.bounds.plus_lower)),
                                detail::pole_side(h, pole, +1, false));
    const double lo = h(lo0) <= 0.0 ? lo0 : detail::pole_side(h, pole, +1, false);
    const auto r = detail::bisect(h, lo, hi, "E_plus interval");
    sol.E_plus = r.root;
    record(r);
  }
  return sol;
}

/// Sample statistics of the marginals for one sigma.
struct DisorderStats {
  double sigma = 0.0;
  std::uint64_t K = 0;
  RunningStats minus;
  RunningStats plus;
  double unperturbed_minus = 0.0;
  double unperturbed_plus = 0.0;
  std::uint64_t bound_violations = 0;
  std::uint64_t root_count_violations = 0;
  double max_residual = 0.0;
};

inline DisorderStats disorder_statistics(const ModelParams& p, double sigma, std::uint64_t K, std::uint64_t seed,
                                         int threads = 1) {
  if (K < 100) fail(ErrorKind::InvalidParameter, "disorder statistics need K >= 100");
  const std::size_t expected_roots = p.L % 2 == 0 ? (p.L + 4) / 2 : (p.L + 3) / 2;
  auto body = [&](DisorderStats& acc, std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const auto real = sample_disorder(sigma, p.L, seed, r);
      const auto c = fourier_couplings(real, p);
      const auto sol = solve_marginals(c, p);
      acc.minus.add(sol.E_minus);
      acc.plus.add(sol.E_plus);
      const auto& b = sol.bounds;
      if (!(b.minus_lower <= sol.E_minus && sol.E_minus <= b.minus_upper)) ++acc.bound_violations;
      if (!(b.plus_lower <= sol.E_plus && sol.E_plus <= b.plus_upper)) ++acc.bound_violations;
      // The generic count assumes every pole is coupled, which holds for sigma > 0.
      if (sigma > 0.0 && sol.root_count() != expected_roots) ++acc.root_count_violations;
      acc.max_residual = std::max(acc.max_residual, sol.max_residual);
    }
  };
  auto merge = [](DisorderStats& a, const DisorderStats& b) {
    a.minus.merge(b.minus);
    a.plus.merge(b.plus);
    a.bound_violations += b.bound_violations;
    a.root_count_violations += b.root_count_violations;
    a.max_residual = std::max(a.max_residual, b.max_residual);
  };
  DisorderStats out = chunked_fold(K, 64, threads, DisorderStats{}, body, merge);
  out.sigma = sigma;
  out.K = K;
  const auto m = unperturbed_marginals(p.t, p.k0(), p.s_tilde());
  out.unperturbed_minus = m[0];
  out.unperturbed_plus = m[1];
  return out;
}

/// Var(E_pm) against sigma on a log-log scale. The same seed is used at every
/// sigma, so the underlying normal draws are shared and the fit is smooth.
struct VarianceScaling {
  std::vector<DisorderStats> points;
  LinearFit minus;
  LinearFit plus;
};

inline VarianceScaling variance_scaling(const ModelParams& p, std::span<const double> sigmas, std::uint64_t K,
                                        std::uint64_t seed, int threads = 1) {
  VarianceScaling v;
  std::vector<double> xs, vm, vp;
  for (double s : sigmas) {
    v.points.push_back(disorder_statistics(p, s, K, seed, threads));
    xs.push_back(s);
    vm.push_back(v.points.back().minus.variance());
    vp.push_back(v.points.back().plus.variance());
  }
  if (xs.size() >= 2) {
    v.minus = log_log_fit(xs, vm);
    v.plus = log_log_fit(xs, vp);
  }
  return v;
}

/// Options for the many-body robustness study.
struct NoiseScalingOptions {
  double filling = 0.5;      // N = round(filling * L)
  double k0_over_pi = 1.0;   // k0 = k0_over_pi * pi
  bool antithetic = true;    // pair each draw with its negation
  int threads = 1;
};

struct NoiseScalingPoint {
  int L = 0;
  int N = 0;
  int n0 = 0;
  double s_tilde = 0.0;
  RunningStats shift_minus;       // mean estimator (pair averages when antithetic)
  RunningStats shift_plus;
  RunningStats sample_minus;      // individual realizations, for the variance
  RunningStats sample_plus;
  RunningStats central;           // background-only state (no marginal occupied)
  RunningStats first_order_minus; // <psi|V|psi> with the unperturbed k0 eigenvectors
  RunningStats first_order_plus;
  double c_minus = 0.0;           // Var(dE_-)/sigma^2
  double c_plus = 0.0;
  double c1_minus = 0.0;          // (2 d0 d1)^2 of the unperturbed lower eigenvector
  double c1_plus = 0.0;
};

struct NoiseScalingReport {
  double sigma = 0.0;
  std::uint64_t K = 0;
  std::uint64_t seed = 0;
  bool antithetic = true;
  std::vector<NoiseScalingPoint> points;
  LinearFit mean_shift_minus;  // log |mean dE_-| against log L
  LinearFit mean_shift_plus;
  LinearFit central_variance;  // log Var(central) against log L
  bool fits_valid = false;
};

namespace detail {
struct BranchEnergies {
  double minus = 0.0;
  double plus = 0.0;
  double central = 0.0;
};

/// Branch energies from a sorted single-particle spectrum: the marginal plus
/// the N-1 lowest bulk levels, and the N lowest bulk levels alone.
inline BranchEnergies branch_energies(const std::vector<double>& spectrum, int N) {
  BranchEnergies b;
  const std::size_t n = spectrum.size();
  double bulk = 0.0;
  for (int i = 0; i < N - 1; ++i) bulk += spectrum[1 + i];
  b.minus = spectrum.front() + bulk;
  b.plus = spectrum.back() + bulk;
  b.central = bulk + (N >= 1 && static_cast<std::size_t>(N) < n - 1 ? spectrum[N] : 0.0);
  return b;
}
}  // namespace detail

/// Exact re-diagonalization study of the many-body branch shifts across ring sizes.
inline NoiseScalingReport many_body_noise_scaling(const ModelParams& base, double sigma, std::span<const int> Ls,
                                                  std::uint64_t K, std::uint64_t seed,
                                                  const NoiseScalingOptions& opt = {}) {
  if (Ls.empty()) fail(ErrorKind::InvalidParameter, "L list is empty");
  if (K < 1) fail(ErrorKind::InvalidParameter, "K must be >= 1");
  NoiseScalingReport rep;
  rep.sigma = sigma;
  rep.K = K;
  rep.seed = seed;
  rep.antithetic = opt.antithetic;
  for (int L : Ls) {
    if (L % 2 != 0) fail(ErrorKind::InvalidGeometry, "noise scaling uses even L, got " + std::to_string(L));
    ModelParams p = base;
    p.L = L;
    p.N = static_cast<int>(std::lround(opt.filling * L));
    const double n0 = opt.k0_over_pi * L / 2.0;
    if (std::abs(n0 - std::round(n0)) > 1e-9) fail(ErrorKind::InvalidGeometry, "k0 not on the grid");
    p.n0 = static_cast<int>(std::round(n0)) % L;
    p.validate(false);

    NoiseScalingPoint pt;
    pt.L = L;
    pt.N = p.N;
    pt.n0 = p.n0;
    pt.s_tilde = p.s_tilde();
    const auto clean = solve_marginals(fourier_couplings(sample_disorder(0.0, L, seed, 0), p), p).spectrum();
    const auto ref = detail::branch_energies(clean, p.N);
    const auto blk = k0_block_from_energy(p, 0.0);
    const double a_minus = -2.0 * blk.d_minus[0] * blk.d_minus[1];
    const double a_plus = -2.0 * blk.d_plus[0] * blk.d_plus[1];
    pt.c1_minus = a_minus * a_minus;
    pt.c1_plus = a_plus * a_plus;

    struct Acc {
      RunningStats sm, sp, im, ip, central, fm, fp;
    };
    auto body = [&](Acc& acc, std::size_t begin, std::size_t end) {
      for (std::size_t r = begin; r < end; ++r) {
        auto real = sample_disorder(sigma, L, seed, r);
        const int copies = opt.antithetic ? 2 : 1;
        double pair_m = 0.0, pair_p = 0.0;
        for (int c = 0; c < copies; ++c) {
          if (c == 1)
            for (auto& d : real.deltas) d = -d;
          const auto spec = solve_marginals(fourier_couplings(real, p), p).spectrum();
          const auto e = detail::branch_energies(spec, p.N);
          const double dm = e.minus - ref.minus, dp = e.plus - ref.plus;
          acc.im.add(dm);
          acc.ip.add(dp);
          acc.central.add(e.central - ref.central);
          pair_m += dm / copies;
          pair_p += dp / copies;
          if (c == 0) {
            double x0 = 0.0;
            for (double d : real.deltas) x0 += d;
            x0 /= std::sqrt(static_cast<double>(L));
            acc.fm.add(a_minus * x0);
            acc.fp.add(a_plus * x0);
          }
        }
        acc.sm.add(pair_m);
        acc.sp.add(pair_p);
      }
    };
    auto merge = [](Acc& a, const Acc& b) {
      a.sm.merge(b.sm);
      a.sp.merge(b.sp);
      a.im.merge(b.im);
      a.ip.merge(b.ip);
      a.central.merge(b.central);
      a.fm.merge(b.fm);
      a.fp.merge(b.fp);
    };
    const Acc acc = chunked_fold(K, 32, opt.threads, Acc{}, body, merge);
    pt.shift_minus = acc.sm;
    pt.shift_plus = acc.sp;
    pt.sample_minus = acc.im;
    pt.sample_plus = acc.ip;
    pt.central = acc.central;
    pt.first_order_minus = acc.fm;
    pt.first_order_plus = acc.fp;
    if (sigma > 0.0) {
      pt.c_minus = acc.im.variance() / (sigma * sigma);
      pt.c_plus = acc.ip.variance() / (sigma * sigma);
    }
    rep.points.push_back(pt);
  }

  if (rep.points.size() >= 2 && sigma > 0.0) {
    std::vector<double> xs, ym, yp, yc;
    bool ok = true;
    for (const auto& pt : rep.points) {
      xs.push_back(pt.L);
      ym.push_back(pt.shift_minus.mean);
      yp.push_back(pt.shift_plus.mean);
      yc.push_back(pt.central.variance());
      ok = ok && pt.shift_minus.mean != 0.0 && pt.shift_plus.mean != 0.0 && pt.central.variance() > 0.0;
    }
    if (ok) {
      rep.mean_shift_minus = log_log_fit(xs, ym);
      rep.mean_shift_plus = log_log_fit(xs, yp);
      rep.central_variance = log_log_fit(xs, yc);
      rep.fits_valid = true;
    }
  }
  return rep;
}

}  // namespace bhw
