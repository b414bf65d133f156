// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "bhw/errors.hpp"
#include "bhw/random.hpp"
#include "bhw/stats.hpp"
#include "bhw/units.hpp"

namespace bhw {

/// Two resonant harmonic wells a distance a apart.
struct OscillatorParams {
  double omega = 2.0 * std::numbers::pi * 5e9;  // rad/s
  double mass = kElectronMass;
  double hbar = kHbar;
  /// Prefactor of s(a); zero selects hbar * omega.
  double energy_scale = 0.0;

  double prefactor() const { return energy_scale != 0.0 ? energy_scale : hbar * omega; }
  /// m omega / (2 hbar), so that s(a) = E (c a^2 - 1) exp(-c a^2 / 2).
  double curvature() const { return mass * omega / (2.0 * hbar); }
  /// Separation at which s(a) changes sign, sqrt(2 hbar / (m omega)).
  double zero_crossing() const { return std::sqrt(1.0 / curvature()); }

  void validate() const {
    if (!(omega > 0.0) || !(mass > 0.0) || !(hbar > 0.0) || !std::isfinite(omega * mass * hbar)) {
      fail(ErrorKind::InvalidParameter, "oscillator omega, mass and hbar must be positive");
    }
  }
};

namespace detail {
inline double hopping_unchecked(double a, const OscillatorParams& osc) {
  const double x = osc.curvature() * a * a;
  return osc.prefactor() * (x - 1.0) * std::exp(-0.5 * x);
}
}  // namespace detail

/// Overlap estimate of the qubit-cavity hopping, hbar omega (m omega a^2 / (2 hbar) - 1) exp(-m omega a^2 / (4 hbar)).
inline double hopping_amplitude(double a, const OscillatorParams& osc = {}) {
  osc.validate();
  if (!(a >= 0.0)) fail(ErrorKind::InvalidParameter, "separation must be >= 0");
  if (std::isinf(a)) return 0.0;
  return detail::hopping_unchecked(a, osc);
}

/// Nodes and weights for integrals of exp(-x^2) f(x).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Newton iteration on the orthonormal Hermite recurrence, with the
/// asymptotic starting guesses of Numerical Recipes' gauher.
inline GaussHermiteRule gauss_hermite(int n) {
  if (n < 1 || n > 400) fail(ErrorKind::InvalidParameter, "Gauss-Hermite order must lie in [1, 400]");
  constexpr double kPim4 = 0.7511255444649425;  // pi^(-1/4)
  GaussHermiteRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[i - 2];
    }
    double pp = 0.0;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      double p1 = kPim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged) fail(ErrorKind::NumericalIntegration, "Gauss-Hermite node did not converge");
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = 2.0 / (pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  // Ascending node order.
  std::reverse(rule.nodes.begin(), rule.nodes.end());
  std::reverse(rule.weights.begin(), rule.weights.end());
  return rule;
}

struct CouplingEstimate {
  double a = 0.0;
  double delta_a = 0.0;
  double mean = 0.0;
  double sigma = 0.0;
  double ratio = std::numeric_limits<double>::infinity();
  double quadrature_error = 0.0;  // difference to the rule with half the nodes
  bool mc_checked = false;
  double mc_mean = 0.0;
  double mc_sigma = 0.0;
  double mc_mean_se = 0.0;
  double mc_sigma_se = 0.0;
};

struct CouplingOptions {
  int nodes = 96;
  std::uint64_t mc_samples = 0;  // 0 skips the Monte-Carlo cross-check
  std::uint64_t seed = 1;
  double mc_sigmas = 3.0;        // allowed disagreement in standard errors
};

namespace detail {
inline void quadrature_moments(double a, double da, const OscillatorParams& osc, const GaussHermiteRule& rule,
                               double& mean, double& sigma) {
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  const double scale = std::sqrt(2.0) * da;
  CompensatedSum m;
  std::vector<double> vals(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    vals[i] = hopping_unchecked(a + scale * rule.nodes[i], osc);
    m.add(rule.weights[i] * vals[i]);
  }
  mean = m.value() * inv_sqrt_pi;
  CompensatedSum v;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) v.add(rule.weights[i] * (vals[i] - mean) * (vals[i] - mean));
  sigma = std::sqrt(std::max(0.0, v.value() * inv_sqrt_pi));
}
}  // namespace detail

/// Mean and standard deviation of s(a + delta), delta ~ N(0, da^2).
inline CouplingEstimate coupling_moments(double a, double da, const OscillatorParams& osc = {},
                                         const CouplingOptions& opt = {}) {
  osc.validate();
  if (!(a >= 0.0) || !std::isfinite(a)) fail(ErrorKind::InvalidParameter, "separation must be finite and >= 0");
  if (!(da > 0.0) || !std::isfinite(da)) fail(ErrorKind::InvalidParameter, "placement spread must be > 0");
  if (opt.nodes < 64) fail(ErrorKind::InvalidParameter, "use at least 64 quadrature nodes");
  CouplingEstimate e;
  e.a = a;
  e.delta_a = da;
  detail::quadrature_moments(a, da, osc, gauss_hermite(opt.nodes), e.mean, e.sigma);
  double mh = 0.0, sh = 0.0;
  detail::quadrature_moments(a, da, osc, gauss_hermite(opt.nodes / 2), mh, sh);
  e.quadrature_error = std::max(std::abs(e.mean - mh), std::abs(e.sigma - sh));
  e.ratio = e.sigma > 0.0 ? e.mean / e.sigma : std::numeric_limits<double>::infinity();

  if (opt.mc_samples > 0) {
    auto rng = derive_stream(opt.seed, StreamPurpose::CouplingCheck, 0);
    RunningStats st;
    for (std::uint64_t i = 0; i < opt.mc_samples; ++i) st.add(detail::hopping_unchecked(a + da * rng.normal(), osc));
    e.mc_checked = true;
    e.mc_mean = st.mean;
    e.mc_sigma = st.stddev();
    e.mc_mean_se = st.standard_error();
    e.mc_sigma_se = e.mc_sigma > 0.0 ? st.variance_standard_error() / (2.0 * e.mc_sigma) : 0.0;
    const double floor = 1e-12 * std::abs(osc.prefactor());
    const bool mean_ok = std::abs(e.mc_mean - e.mean) <= opt.mc_sigmas * e.mc_mean_se + floor;
    const bool sigma_ok = std::abs(e.mc_sigma - e.sigma) <= opt.mc_sigmas * e.mc_sigma_se + floor;
    if (!mean_ok || !sigma_ok) {
      fail(ErrorKind::NumericalIntegration,
           "quadrature and Monte-Carlo moments disagree at a=" + std::to_string(a) + " (mean " + std::to_string(e.mean) +
               " vs " + std::to_string(e.mc_mean) + ", sigma " + std::to_string(e.sigma) + " vs " +
               std::to_string(e.mc_sigma) + ")");
    }
  }
  return e;
}

struct DistanceOptimum {
  double delta_a = 0.0;
  double a_opt = 0.0;
  double r_opt = 0.0;
  double grid_a = 0.0;  // best grid point before refinement
  double grid_r = 0.0;
  CouplingEstimate estimate;
};

struct OptimizeOptions {
  int grid_points = 512;
  double relative_tolerance = 1e-10;  // on a; well below the 1e-4 requirement
  CouplingOptions coupling{};
  double max_factor = 10.0;            // grid spans (a0, max_factor * a0]
};

/// Separation maximizing r = mean/sigma beyond the zero of s(a).
inline DistanceOptimum optimize_distance(double da, const OscillatorParams& osc = {}, const OptimizeOptions& opt = {}) {
  osc.validate();
  if (!(da >= 0.1e-9 && da <= 100e-9)) fail(ErrorKind::InvalidParameter, "placement spread must lie in [0.1 nm, 100 nm]");
  if (opt.grid_points < 3) fail(ErrorKind::InvalidParameter, "grid needs >= 3 points");
  const auto rule = gauss_hermite(opt.coupling.nodes);
  auto ratio = [&](double a) {
    double m = 0.0, s = 0.0;
    detail::quadrature_moments(a, da, osc, rule, m, s);
    return s > 0.0 ? m / s : (m > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity());
  };
  const double a0 = osc.zero_crossing();
  // Log-spaced offsets above the zero crossing: a = a0 (1 + 10^u).
  const double u_lo = -4.0, u_hi = std::log10(opt.max_factor - 1.0);
  std::vector<double> as(opt.grid_points), rs(opt.grid_points);
  for (int i = 0; i < opt.grid_points; ++i) {
    const double u = u_lo + (u_hi - u_lo) * i / (opt.grid_points - 1);
    as[i] = a0 * (1.0 + std::pow(10.0, u));
    rs[i] = ratio(as[i]);
  }
  const auto [mn, mx] = std::minmax_element(rs.begin(), rs.end());
  if (!(*mx - *mn >= 1e-12)) fail(ErrorKind::DegenerateObjective, "ratio is flat across the search grid");
  const std::size_t best = static_cast<std::size_t>(mx - rs.begin());

  double lo = as[best == 0 ? 0 : best - 1];
  double hi = as[std::min<std::size_t>(best + 1, as.size() - 1)];
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = ratio(x1), f2 = ratio(x2);
  for (int it = 0; it < 200 && (hi - lo) > opt.relative_tolerance * hi; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = ratio(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = ratio(x1);
    }
  }
  DistanceOptimum out;
  out.delta_a = da;
  out.grid_a = as[best];
  out.grid_r = rs[best];
  out.a_opt = 0.5 * (lo + hi);
  out.r_opt = ratio(out.a_opt);
  if (out.grid_r > out.r_opt) {  // refinement never loses against the grid
    out.a_opt = out.grid_a;
    out.r_opt = out.grid_r;
  }
  out.estimate = coupling_moments(out.a_opt, da, osc, opt.coupling);
  return out;
}

}  // namespace bhw
