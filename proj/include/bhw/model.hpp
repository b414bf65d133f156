// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "bhw/combinatorics.hpp"
#include "bhw/errors.hpp"

namespace bhw {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
/// Largest ring supported by the 64-bit determinant encoding and binomial table.
inline constexpr int kMaxRingSites = 62;

/// Couplings and geometry of the wheel with its control qubit.
///
/// Energies are in GHz. The coupled momentum is k0 = 2*pi*n0/L.
struct ModelParams {
  int L = 6;
  double t = 1.0;
  double s = 1.0;
  int n0 = 1;
  double s_prime = 0.0;
  double mu_c = 0.0;
  int N = 3;

  /// Rescaled ring-to-center hopping s*sqrt(L). Always derived, never stored.
  double s_tilde() const { return s * std::sqrt(static_cast<double>(L)); }
  double k0() const { return kTwoPi * n0 / L; }

  /// Throws on geometry or filling violations.
  void validate(bool with_control = true) const {
    if (L < 3) fail(ErrorKind::InvalidGeometry, "L must be >= 3, got " + std::to_string(L));
    if (L > kMaxRingSites) fail(ErrorKind::InvalidGeometry, "L exceeds " + std::to_string(kMaxRingSites));
    if (n0 < 0 || n0 >= L) fail(ErrorKind::InvalidGeometry, "n0 must lie in [0, L)");
    const int n_max = with_control ? L + 2 : L + 1;
    if (N < 0 || N > n_max) {
      fail(ErrorKind::InvalidFilling, "N=" + std::to_string(N) + " outside [0, " + std::to_string(n_max) + "]");
    }
    for (double v : {t, s, s_prime, mu_c}) {
      if (!std::isfinite(v)) fail(ErrorKind::InvalidParameter, "non-finite coupling");
    }
  }

  /// k0 at 0 or pi makes the two branch amplitudes degenerate in a way reports should flag.
  bool k0_is_special() const { return n0 == 0 || 2 * n0 == L; }
};

/// Tight-binding dispersion of the ring.
inline double ring_dispersion(double k, double t) { return -2.0 * t * std::cos(k); }

/// Ring momenta k_n = 2*pi*n/L together with the coupled index n0.
class MomentumGrid {
 public:
  MomentumGrid(int L, int n0) : L_(L), n0_(n0) {
    if (L < 3) fail(ErrorKind::InvalidGeometry, "L must be >= 3, got " + std::to_string(L));
    if (L > kMaxRingSites) fail(ErrorKind::InvalidGeometry, "L exceeds " + std::to_string(kMaxRingSites));
    if (n0 < 0 || n0 >= L) fail(ErrorKind::InvalidGeometry, "n0 must lie in [0, L)");
    values_.reserve(L);
    for (int n = 0; n < L; ++n) values_.push_back(kTwoPi * n / L);
  }

  int size() const { return L_; }
  int k0_position() const { return n0_; }
  double k0() const { return values_[n0_]; }
  const std::vector<double>& values() const { return values_; }
  double operator[](int n) const { return values_[n]; }

  /// Number of ring modes other than k0.
  int mode_count() const { return L_ - 1; }
  /// Grid index of determinant mode m (modes skip k0).
  int grid_index(int mode) const { return mode < n0_ ? mode : mode + 1; }
  int mode_of_grid_index(int n) const {
    if (n == n0_) fail(ErrorKind::InvalidParameter, "k0 is not a determinant mode");
    return n < n0_ ? n : n - 1;
  }
  /// min(n, L-n): momenta k and 2*pi-k share this label and hence their energy.
  int canonical_index(int n) const { return std::min(n, L_ - n); }

  /// Dispersion evaluated on the canonical momentum so that k and 2*pi-k give
  /// bit-identical energies.
  double dispersion(int n, double t) const {
    return ring_dispersion(kTwoPi * canonical_index(n) / L_, t);
  }
  double mode_energy(int mode, double t) const { return dispersion(grid_index(mode), t); }

 private:
  int L_;
  int n0_;
  std::vector<double> values_;
};

inline MomentumGrid momentum_grid(int L, int n0 = 0) { return MomentumGrid(L, n0); }

/// Occupation of the ring modes other than k0. Bit m refers to determinant mode m.
struct SlaterDet {
  std::uint64_t bits = 0;

  int count() const { return std::popcount(bits); }
  bool occupied(int mode) const { return (bits >> mode) & 1u; }
  auto operator<=>(const SlaterDet&) const = default;
};

/// All determinants with m occupied modes, in increasing bitmask order.
inline std::vector<SlaterDet> enumerate_slaters(int L, int m) {
  if (L < 3) fail(ErrorKind::InvalidGeometry, "L must be >= 3");
  if (L > kMaxRingSites) fail(ErrorKind::InvalidGeometry, "L too large");
  if (m < 0 || m > L - 1) {
    fail(ErrorKind::InvalidFilling, "m=" + std::to_string(m) + " outside [0, " + std::to_string(L - 1) + "]");
  }
  const std::uint64_t count = binomial(L - 1, m);
  std::vector<SlaterDet> out;
  out.reserve(count);
  std::uint64_t mask = m == 0 ? 0 : (std::uint64_t{1} << m) - 1;
  for (std::uint64_t i = 0; i < count; ++i) {
    out.push_back({mask});
    if (m > 0) mask = next_combination(mask);
  }
  return out;
}

/// Sum of ring energies over the occupied modes, in increasing mode order.
inline double slater_energy(const SlaterDet& fs, double t, const MomentumGrid& grid) {
  double e = 0.0;
  for (std::uint64_t b = fs.bits; b != 0; b &= b - 1) e += grid.mode_energy(std::countr_zero(b), t);
  return e;
}

}  // namespace bhw
