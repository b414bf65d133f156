// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <numbers>

#include "bhw/coupling.hpp"

namespace bhw {
namespace {

constexpr double kNm = 1e-9;

TEST(Hopping, ClosedFormPoints) {
  const OscillatorParams osc;
  EXPECT_NEAR(hopping_amplitude(0.0, osc), -kHbar * osc.omega, 1e-40);
  EXPECT_NEAR(hopping_amplitude(osc.zero_crossing(), osc) / (kHbar * osc.omega), 0.0, 1e-15);
  EXPECT_NEAR(osc.zero_crossing(), std::sqrt(2.0 * kHbar / (kElectronMass * osc.omega)), 1e-22);
  EXPECT_EQ(hopping_amplitude(std::numeric_limits<double>::infinity(), osc), 0.0);
  EXPECT_LT(std::abs(hopping_amplitude(50.0 * osc.zero_crossing(), osc)), 1e-300);
  EXPECT_THROW(hopping_amplitude(-1e-9, osc), Error);
  OscillatorParams bad;
  bad.mass = 0.0;
  EXPECT_THROW(hopping_amplitude(1e-9, bad), Error);
}

TEST(GaussHermite, IntegratesPolynomialsExactly) {
  const auto rule = gauss_hermite(64);
  double w = 0.0, x2 = 0.0, x4 = 0.0, x3 = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    w += rule.weights[i];
    x2 += rule.weights[i] * x * x;
    x3 += rule.weights[i] * x * x * x;
    x4 += rule.weights[i] * x * x * x * x;
  }
  const double sp = std::sqrt(std::numbers::pi);
  EXPECT_NEAR(w, sp, 1e-13);
  EXPECT_NEAR(x2, sp / 2.0, 1e-13);
  EXPECT_NEAR(x3, 0.0, 1e-13);
  EXPECT_NEAR(x4, 3.0 * sp / 4.0, 1e-13);
  EXPECT_TRUE(std::is_sorted(rule.nodes.begin(), rule.nodes.end()));
}

TEST(Moments, NarrowSpreadLimit) {
  const OscillatorParams osc;
  const double a = 150 * kNm;
  const auto e = coupling_moments(a, 1e-6 * kNm, osc);
  EXPECT_NEAR(e.mean / hopping_amplitude(a, osc), 1.0, 1e-9);
  EXPECT_LT(e.sigma / std::abs(e.mean), 1e-7);
  EXPECT_THROW(coupling_moments(a, 0.0, osc), Error);
  CouplingOptions few;
  few.nodes = 32;
  EXPECT_THROW(coupling_moments(a, kNm, osc, few), Error);
}

TEST(Moments, MonteCarloCrossCheck) {
  const OscillatorParams osc;
  CouplingOptions opt;
  opt.mc_samples = 1000000;
  opt.seed = 4;
  const auto e = coupling_moments(120 * kNm, 5 * kNm, osc, opt);
  ASSERT_TRUE(e.mc_checked);
  EXPECT_LE(std::abs(e.mc_mean - e.mean) / std::abs(e.mean), 1e-3);
  EXPECT_LE(std::abs(e.mc_sigma - e.sigma) / e.sigma, 1e-3 * 10);  // sigma converges slower; 3 SE is enforced inside
  EXPECT_LT(e.quadrature_error, 1e-10 * std::abs(e.mean));
}

TEST(Moments, ScaleInvariantRatio) {
  OscillatorParams a, b;
  b.energy_scale = 3.7 * a.prefactor();
  const auto ea = coupling_moments(140 * kNm, 2 * kNm, a);
  const auto eb = coupling_moments(140 * kNm, 2 * kNm, b);
  EXPECT_NEAR(eb.mean / ea.mean, 3.7, 1e-12);
  EXPECT_NEAR(eb.sigma / ea.sigma, 3.7, 1e-12);
  EXPECT_NEAR(ea.ratio, eb.ratio, 1e-9 * ea.ratio);
}

TEST(Optimize, RefinementBeatsAndStaysNearGrid) {
  const auto opt = optimize_distance(2 * kNm);
  EXPECT_GE(opt.r_opt, opt.grid_r);
  // Neighbouring grid points are spaced by a factor of about 10^(5/511) in a - a0.
  const double a0 = OscillatorParams{}.zero_crossing();
  const double step = std::pow(10.0, (4.0 + std::log10(9.0)) / 511.0);
  EXPECT_LE((opt.a_opt - a0) / (opt.grid_a - a0), step * 1.0001);
  EXPECT_GE((opt.a_opt - a0) / (opt.grid_a - a0), 1.0 / step / 1.0001);
  EXPECT_GT(opt.a_opt, a0);
}

TEST(Optimize, MonotoneInPlacementSpread) {
  double prev = 0.0;
  for (double da : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
    const auto o = optimize_distance(da * kNm);
    EXPECT_GT(o.a_opt, prev) << da;
    prev = o.a_opt;
  }
}

TEST(Optimize, FrozenReferenceAtOneNanometre) {
  // Values produced by this implementation (96-node rule) and frozen as a regression guard.
  const auto o = optimize_distance(1 * kNm);
  EXPECT_NEAR(o.a_opt / kNm, 148.714, 1e-3);
  EXPECT_NEAR(o.r_opt, 3474.84, 0.01);
}

TEST(Optimize, Errors) {
  EXPECT_THROW(optimize_distance(0.05 * kNm), Error);
  EXPECT_THROW(optimize_distance(200 * kNm), Error);
  OscillatorParams heavy;
  heavy.mass = 1.0;
  try {
    optimize_distance(1 * kNm, heavy);
    FAIL() << "expected a degenerate objective";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateObjective);
  }
}

}  // namespace
}  // namespace bhw
