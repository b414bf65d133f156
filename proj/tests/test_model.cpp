// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <numbers>
#include <map>
#include <set>

#include "bhw/combinatorics.hpp"
#include "bhw/fs_stream.hpp"
#include "bhw/model.hpp"
#include "bhw/units.hpp"

namespace bhw {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(MomentumGrid, SixSites) {
  const auto g = momentum_grid(6);
  ASSERT_EQ(g.size(), 6);
  for (int n = 0; n < 6; ++n) EXPECT_NEAR(g.values()[n], n * kPi / 3.0, 1e-15);
}

TEST(MomentumGrid, FourSites) {
  const auto g = momentum_grid(4);
  const std::vector<double> want{0.0, kPi / 2, kPi, 3 * kPi / 2};
  for (int n = 0; n < 4; ++n) EXPECT_NEAR(g.values()[n], want[n], 1e-15);
}

TEST(MomentumGrid, K0Position) {
  const MomentumGrid g(6, 1);
  EXPECT_EQ(g.k0_position(), 1);
  EXPECT_NEAR(g.k0(), kPi / 3.0, 1e-15);
}

TEST(MomentumGrid, StrictlyIncreasingInRange) {
  for (int L = 3; L <= 30; ++L) {
    const auto g = momentum_grid(L);
    ASSERT_EQ(static_cast<int>(g.values().size()), L);
    EXPECT_EQ(g.values().front(), 0.0);
    for (int n = 1; n < L; ++n) EXPECT_LT(g.values()[n - 1], g.values()[n]);
    EXPECT_LT(g.values().back(), kTwoPi);
  }
}

TEST(MomentumGrid, RejectsSmallRings) {
  try {
    momentum_grid(2);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidGeometry);
  }
}

TEST(MomentumGrid, ModeIndexingSkipsK0) {
  const MomentumGrid g(7, 3);
  ASSERT_EQ(g.mode_count(), 6);
  std::set<int> seen;
  for (int m = 0; m < g.mode_count(); ++m) {
    const int n = g.grid_index(m);
    EXPECT_NE(n, 3);
    EXPECT_EQ(g.mode_of_grid_index(n), m);
    seen.insert(n);
  }
  EXPECT_EQ(seen.size(), 6u);
}

TEST(ModelParams, DerivedCoupling) {
  ModelParams p;
  p.L = 20;
  p.s = 4.5;
  EXPECT_DOUBLE_EQ(p.s_tilde(), 4.5 * std::sqrt(20.0));
}

TEST(ModelParams, FillingLimits) {
  ModelParams p;
  p.L = 6;
  p.N = 8;
  EXPECT_NO_THROW(p.validate(true));
  EXPECT_THROW(p.validate(false), Error);
  p.N = 9;
  EXPECT_THROW(p.validate(true), Error);
  p.N = 3;
  p.n0 = 6;
  EXPECT_THROW(p.validate(true), Error);
}

TEST(Slaters, Counts) {
  EXPECT_EQ(enumerate_slaters(6, 3).size(), 10u);
  const auto empty = enumerate_slaters(6, 0);
  ASSERT_EQ(empty.size(), 1u);
  EXPECT_EQ(empty[0].bits, 0u);
  EXPECT_EQ(enumerate_slaters(20, 8).size(), 75582u);
}

TEST(Slaters, OutOfRange) {
  for (int m : {-1, 6}) {
    try {
      enumerate_slaters(6, m);
      FAIL() << "expected an error for m=" << m;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidFilling);
    }
  }
}

TEST(Slaters, BijectionOntoSubsetsInIncreasingOrder) {
  for (int L = 3; L <= 10; ++L) {
    for (int m = 0; m <= L - 1; ++m) {
      const auto dets = enumerate_slaters(L, m);
      ASSERT_EQ(dets.size(), binomial(L - 1, m));
      for (std::size_t i = 0; i < dets.size(); ++i) {
        EXPECT_EQ(dets[i].count(), m);
        EXPECT_LT(dets[i].bits, std::uint64_t{1} << (L - 1));
        if (i > 0) {
          EXPECT_LT(dets[i - 1].bits, dets[i].bits);
        }
      }
    }
  }
}

TEST(Slaters, StableAcrossCalls) {
  const auto a = enumerate_slaters(12, 5);
  const auto b = enumerate_slaters(12, 5);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].bits, b[i].bits);
}

TEST(SlaterEnergy, Empty) { EXPECT_EQ(slater_energy(SlaterDet{0}, 1.0, MomentumGrid(6, 1)), 0.0); }

TEST(SlaterEnergy, HandValue) {
  // k0 = 0, so modes are k_1..k_5; occupy 2pi/3, pi, 4pi/3 (grid 2, 3, 4 -> modes 1, 2, 3).
  const MomentumGrid g(6, 0);
  const SlaterDet fs{0b01110};
  EXPECT_NEAR(slater_energy(fs, 1.0, g), 4.0, 1e-14);
}

TEST(SlaterEnergy, MatchesRingDiagonalization) {
  for (int L : {5, 6, 8}) {
    const double t = 0.7;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(L, L);
    for (int j = 0; j < L; ++j) {
      H(j, (j + 1) % L) -= t;
      H((j + 1) % L, j) -= t;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    std::vector<double> ring(es.eigenvalues().data(), es.eigenvalues().data() + L);
    for (int n0 = 0; n0 < L; ++n0) {
      const MomentumGrid g(L, n0);
      for (int m = 0; m <= L - 1; ++m) {
        std::vector<double> ed_sums, analytic;
        for (const auto& fs : enumerate_slaters(L, m)) analytic.push_back(slater_energy(fs, t, g));
        // Every subset of the ring levels that leaves out one level equal to eps(k0).
        std::vector<double> levels;
        for (int n = 0; n < L; ++n) levels.push_back(g.dispersion(n, t));
        std::vector<double> sorted_levels = levels;
        std::sort(sorted_levels.begin(), sorted_levels.end());
        for (int i = 0; i < L; ++i) EXPECT_NEAR(sorted_levels[i], ring[i], 1e-12);
        for (const auto& fs : enumerate_slaters(L, m)) {
          double e = 0.0;
          for (int mode = 0; mode < L - 1; ++mode)
            if (fs.occupied(mode)) e += ring_dispersion(g.values()[g.grid_index(mode)], t);
          ed_sums.push_back(e);
        }
        for (std::size_t i = 0; i < analytic.size(); ++i) EXPECT_NEAR(analytic[i], ed_sums[i], 1e-12);
      }
    }
  }
}

TEST(SlaterEnergy, AdditiveUnderDisjointUnion) {
  const MomentumGrid g(9, 2);
  for (std::uint64_t a = 0; a < 256; a += 7) {
    for (std::uint64_t b = 0; b < 256; b += 11) {
      if (a & b) continue;
      EXPECT_NEAR(slater_energy(SlaterDet{a | b}, 1.3, g),
                  slater_energy(SlaterDet{a}, 1.3, g) + slater_energy(SlaterDet{b}, 1.3, g), 1e-12);
    }
  }
}

TEST(SlaterEnergy, ComplementReflection) {
  // The ring levels sum to zero, so E(FS) + E(complement) = -eps(k0). The
  // energy multiset of m modes is the mirror image of that of L-1-m modes
  // about -eps(k0)/2; for L = 6, n0 = 1 the m = 2 and m = 3 sets pair up.
  const int L = 6;
  const MomentumGrid g(L, 1);
  const double t = 1.0;
  const double eps0 = g.dispersion(1, t);
  std::vector<double> two, three;
  for (const auto& fs : enumerate_slaters(L, 2)) two.push_back(slater_energy(fs, t, g));
  for (const auto& fs : enumerate_slaters(L, 3)) three.push_back(-eps0 - slater_energy(fs, t, g));
  std::sort(two.begin(), two.end());
  std::sort(three.begin(), three.end());
  ASSERT_EQ(two.size(), three.size());
  for (std::size_t i = 0; i < two.size(); ++i) EXPECT_NEAR(two[i], three[i], 1e-12);
}

TEST(Combinatorics, UnrankRankRoundTrip) {
  for (int n = 1; n <= 14; ++n) {
    for (int k = 0; k <= n; ++k) {
      std::uint64_t mask = unrank_combination(n, k, 0);
      for (std::uint64_t r = 0; r < binomial(n, k); ++r) {
        EXPECT_EQ(unrank_combination(n, k, r), mask);
        EXPECT_EQ(rank_combination(mask), r);
        if (k > 0 && r + 1 < binomial(n, k)) mask = next_combination(mask);
      }
    }
  }
}

TEST(Combinatorics, PascalValues) {
  EXPECT_EQ(binomial(19, 9), 92378u);
  EXPECT_EQ(binomial(27, 13), 20058300u);
  EXPECT_EQ(binomial(5, 7), 0u);
  EXPECT_EQ(binomial(60, 30), 118264581564861424ull);
}

TEST(FsStream, StrategiesCoverTheSameMultiset) {
  for (int L : {6, 9, 12}) {
    for (int n0 : {0, 1, L / 2}) {
      const MomentumGrid g(L, n0);
      for (int m = 0; m <= L - 1; ++m) {
        std::map<long long, double> per_det, classes;
        auto key = [](double e) { return std::llround(e * 1e9); };
        const FsStream a(g, 1.0, m, FsStrategy::PerDeterminant);
        a.visit(0, a.size(), [&](const FsTerm& t) { per_det[key(t.energy)] += t.weight; });
        const FsStream b(g, 1.0, m, FsStrategy::EnergyClasses);
        b.visit(0, b.size(), [&](const FsTerm& t) { classes[key(t.energy)] += t.weight; });
        ASSERT_EQ(per_det.size(), classes.size());
        for (const auto& [e, w] : per_det) EXPECT_DOUBLE_EQ(classes[e], w);
      }
    }
  }
}

TEST(FsStream, ChunkedVisitEqualsFullVisit) {
  const MomentumGrid g(14, 7);
  const FsStream s(g, 1.0, 6, FsStrategy::PerDeterminant);
  std::vector<std::uint64_t> full, chunked;
  s.visit(0, s.size(), [&](const FsTerm& t) { full.push_back(t.fs.bits); });
  for (std::size_t b = 0; b < s.size(); b += 97) {
    s.visit(b, std::min(s.size(), b + 97), [&](const FsTerm& t) { chunked.push_back(t.fs.bits); });
  }
  EXPECT_EQ(full, chunked);
  const auto dets = enumerate_slaters(14, 6);
  ASSERT_EQ(dets.size(), full.size());
  for (std::size_t i = 0; i < dets.size(); ++i) EXPECT_EQ(dets[i].bits, full[i]);
}

TEST(Units, PinnedConstants) {
  // h / k_B and hbar / k_B in mK per GHz, from the exact SI values of h and k_B.
  EXPECT_NEAR(kMillikelvinPerGHzFrequency, 47.99243073366221, 1e-12);
  EXPECT_NEAR(kMillikelvinPerGHzAngular, 47.99243073366221 / (2 * kPi), 1e-12);
}

TEST(Units, BetaExamples) {
  const auto h = UnitSystem::frequency();
  EXPECT_NEAR(beta(kMillikelvinPerGHzFrequency, h) * 1.0, 1.0, 1e-15);
  EXPECT_NEAR(beta(47.99, h), 1.0, 1e-4);
  EXPECT_NEAR(beta(15.0, h) * 17.0, 54.4, 0.05);
  EXPECT_EQ(beta(std::numeric_limits<double>::infinity(), h), 0.0);
  const auto c = UnitSystem::custom(2.0);
  EXPECT_DOUBLE_EQ(beta(4.0, c), 0.5);
}

TEST(Units, RejectsNonPositiveTemperature) {
  for (double T : {0.0, -1.0, std::numeric_limits<double>::quiet_NaN()}) {
    try {
      beta(T);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidTemperature);
    }
  }
}

}  // namespace
}  // namespace bhw
