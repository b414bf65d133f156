// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "bhw/errors.hpp"
#include "bhw/fs_stream.hpp"
#include "bhw/hermitian.hpp"
#include "bhw/model.hpp"

namespace bhw {

/// The two-state problem of the k0 ring mode and the center site on top of a
/// fixed background determinant.
///
/// Basis: (k0 mode occupied with the center empty, center occupied with the
/// k0 mode empty). Center occupation rescales the ring kinetic energy by
/// (1 - 2/L), which is why the background energy enters both diagonals
/// differently.
struct K0Block {
  double epsilon0 = 0.0;  // 2 t cos k0
  double s_tilde = 0.0;
  double fs_energy = 0.0;
  std::array<std::array<double, 2>, 2> matrix{};
  double E_minus = 0.0;
  double E_plus = 0.0;
  std::array<double, 2> d_minus{};  // (d0, d1) of the lower eigenvector
  std::array<double, 2> d_plus{};   // (d0, d1) of the upper eigenvector
  bool degenerate = false;
};

/// Ring dispersion at k0, evaluated like MomentumGrid::dispersion.
inline double k0_dispersion(const ModelParams& p) {
  const int c = std::min(p.n0, p.L - p.n0);
  return ring_dispersion(kTwoPi * c / p.L, p.t);
}

/// k0 block for a background of energy `fs_energy`. Phases: d0 >= 0.
inline K0Block k0_block_from_energy(const ModelParams& p, double fs_energy) {
  K0Block b;
  b.epsilon0 = 2.0 * p.t * std::cos(p.k0());
  b.s_tilde = p.s_tilde();
  b.fs_energy = fs_energy;
  const double ring = fs_energy + k0_dispersion(p);
  const double center = fs_energy * (1.0 - 2.0 / p.L);
  b.matrix = {{{ring, -b.s_tilde}, {-b.s_tilde, center}}};
  const auto eig = eigh2(ring, center, -b.s_tilde);
  b.E_minus = eig.lower;
  b.E_plus = eig.upper;
  b.d_minus = eig.lower_vector;
  b.d_plus = eig.upper_vector;
  b.degenerate = eig.degenerate;
  return b;
}

/// k0 block on top of the determinant `fs`, which must hold N-1 modes.
inline K0Block k0_block(const ModelParams& p, const SlaterDet& fs) {
  p.validate(false);
  if (fs.count() != p.N - 1) {
    fail(ErrorKind::InvalidSector, "k0 block needs N-1=" + std::to_string(p.N - 1) + " background modes, got " +
                                       std::to_string(fs.count()));
  }
  const MomentumGrid grid(p.L, p.n0);
  return k0_block_from_energy(p, slater_energy(fs, p.t, grid));
}

/// Ratio appearing in the closed-form single-particle eigenvectors,
/// eps0/(2 s~) +- sqrt(eps0^2 + 4 s~^2)/(2|s~|).
inline double closed_form_delta(double epsilon0, double s_tilde, int sign) {
  return epsilon0 / (2.0 * s_tilde) + sign * std::sqrt(epsilon0 * epsilon0 + 4.0 * s_tilde * s_tilde) / (2.0 * std::abs(s_tilde));
}
inline double closed_form_psi(double delta) { return 1.0 / std::sqrt(1.0 + delta * delta); }

/// Unperturbed marginal single-particle energies -t cos k0 +- sqrt((t cos k0)^2 + s~^2).
inline std::array<double, 2> unperturbed_marginals(double t, double k0, double s_tilde) {
  const double a = t * std::cos(k0);
  const double r = std::sqrt(a * a + s_tilde * s_tilde);
  return {-a - r, -a + r};
}

enum class WheelSector { Zero, OneMinus, OnePlus, Two };
enum class Parity { Even, Odd };

inline Parity parity(WheelSector s) {
  return (s == WheelSector::Zero || s == WheelSector::Two) ? Parity::Even : Parity::Odd;
}
inline int k0_occupation(WheelSector s) {
  switch (s) {
    case WheelSector::Zero: return 0;
    case WheelSector::OneMinus:
    case WheelSector::OnePlus: return 1;
    case WheelSector::Two: return 2;
  }
  return 0;
}
inline std::string to_string(WheelSector s) {
  switch (s) {
    case WheelSector::Zero: return "0";
    case WheelSector::OneMinus: return "1-";
    case WheelSector::OnePlus: return "1+";
    case WheelSector::Two: return "2";
  }
  return "?";
}

/// Energy of the bare-wheel state in sector `sector` on top of a background
/// of energy `fs_energy`.
inline double wheel_energy_from_fs_energy(const ModelParams& p, double fs_energy, WheelSector sector) {
  switch (sector) {
    case WheelSector::Zero: return fs_energy;
    case WheelSector::OneMinus: return k0_block_from_energy(p, fs_energy).E_minus;
    case WheelSector::OnePlus: return k0_block_from_energy(p, fs_energy).E_plus;
    case WheelSector::Two: return (fs_energy + k0_dispersion(p)) * (1.0 - 2.0 / p.L);
  }
  return 0.0;
}

/// Many-body energy of a bare-wheel eigenstate labelled by (FS, sector).
inline double wheel_many_body_energy(const ModelParams& p, const SlaterDet& fs, WheelSector sector) {
  p.validate(false);
  const int need = p.N - k0_occupation(sector);
  if (fs.count() != need) {
    fail(ErrorKind::InvalidSector, "sector " + to_string(sector) + " at N=" + std::to_string(p.N) + " needs " +
                                       std::to_string(need) + " background modes, got " + std::to_string(fs.count()));
  }
  const MomentumGrid grid(p.L, p.n0);
  return wheel_energy_from_fs_energy(p, slater_energy(fs, p.t, grid), sector);
}

struct WheelLevel {
  WheelSector sector = WheelSector::Zero;
  SlaterDet fs;
  double energy = 0.0;
};

/// Every bare-wheel eigenvalue at filling p.N, grouped by sector (0, 1-, 1+, 2)
/// and by determinant order within each sector.
inline std::vector<WheelLevel> wheel_spectrum(const ModelParams& p) {
  p.validate(false);
  const MomentumGrid grid(p.L, p.n0);
  std::vector<WheelLevel> out;
  for (WheelSector sector : {WheelSector::Zero, WheelSector::OneMinus, WheelSector::OnePlus, WheelSector::Two}) {
    const int m = p.N - k0_occupation(sector);
    if (m < 0 || m > p.L - 1) continue;
    for (const auto& fs : enumerate_slaters(p.L, m)) {
      out.push_back({sector, fs, wheel_energy_from_fs_energy(p, slater_energy(fs, p.t, grid), sector)});
    }
  }
  return out;
}

}  // namespace bhw
