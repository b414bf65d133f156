// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bhw/errors.hpp"
#include "bhw/fs_stream.hpp"
#include "bhw/hermitian.hpp"
#include "bhw/model.hpp"
#include "bhw/wheel.hpp"

namespace bhw {

/// Block dimension per N_k0 (the conserved k0 plus control occupation).
constexpr int sector_dimension(int n_k0) { return (n_k0 == 1 || n_k0 == 2) ? 3 : 1; }

/// Number of eigenstates in sector n_k0 at filling N on a ring of L sites.
inline std::uint64_t sector_state_count(int L, int N, int n_k0) {
  return static_cast<std::uint64_t>(sector_dimension(n_k0)) * binomial(L - 1, N - n_k0);
}

/// Real-valued block assembly for a background of energy e.
///
/// Basis for N_k0 = 1: (|1,0>, |0,+>, |0,->), where the first label is the
/// control occupation and +/- are the k0-block eigenstates.
/// Basis for N_k0 = 2: (|1,->, |1,+>, |0,2>).
/// States are built as c_control^dag c_center^dag c_k0^dag |FS>, so moving a
/// particle from the control onto the center carries no fermionic sign.
class BlockKernel {
 public:
  explicit BlockKernel(const ModelParams& p)
      : params_(p), eps_k0_(k0_dispersion(p)), rescale_(1.0 - 2.0 / p.L) {}

  const ModelParams& params() const { return params_; }

  K0Block k0(double e) const { return k0_block_from_energy(params_, e); }

  double sector0(double e) const { return e; }
  double sector3(double e) const { return (e + eps_k0_) * rescale_ + params_.mu_c; }
  double two_occupied(double e) const { return (e + eps_k0_) * rescale_; }

  SmallMatrix<double, 3> sector1(double e, const K0Block& b) const {
    const double sp = params_.s_prime;
    return {{{e + params_.mu_c, sp * b.d_plus[1], sp * b.d_minus[1]},
             {sp * b.d_plus[1], b.E_plus, 0.0},
             {sp * b.d_minus[1], 0.0, b.E_minus}}};
  }

  SmallMatrix<double, 3> sector2(double e, const K0Block& b) const {
    const double sp = params_.s_prime;
    return {{{b.E_minus + params_.mu_c, 0.0, sp * b.d_minus[0]},
             {0.0, b.E_plus + params_.mu_c, sp * b.d_plus[0]},
             {sp * b.d_minus[0], sp * b.d_plus[0], two_occupied(e)}}};
  }

 private:
  ModelParams params_;
  double eps_k0_;
  double rescale_;
};

struct SectorBlock {
  int n_k0 = 0;
  SlaterDet fs;
  double fs_energy = 0.0;
  int dim = 1;
  SmallMatrix<Complex, 3> matrix{};  // only the leading dim x dim corner is used
};

inline SectorBlock block_from_energy(const ModelParams& p, double fs_energy, int n_k0) {
  if (n_k0 < 0 || n_k0 > 3) fail(ErrorKind::InvalidSector, "N_k0 must be 0..3");
  const BlockKernel kernel(p);
  SectorBlock blk;
  blk.n_k0 = n_k0;
  blk.fs_energy = fs_energy;
  blk.dim = sector_dimension(n_k0);
  auto copy = [&](const SmallMatrix<double, 3>& m) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) blk.matrix[i][j] = m[i][j];
  };
  switch (n_k0) {
    case 0: blk.matrix[0][0] = kernel.sector0(fs_energy); break;
    case 1: copy(kernel.sector1(fs_energy, kernel.k0(fs_energy))); break;
    case 2: copy(kernel.sector2(fs_energy, kernel.k0(fs_energy))); break;
    case 3: blk.matrix[0][0] = kernel.sector3(fs_energy); break;
  }
  return blk;
}

/// Block of sector n_k0 on top of the determinant fs (N - n_k0 modes).
inline SectorBlock build_block(const ModelParams& p, const SlaterDet& fs, int n_k0) {
  p.validate(true);
  if (n_k0 < 0 || n_k0 > 3) fail(ErrorKind::InvalidSector, "N_k0 must be 0..3");
  if (fs.count() != p.N - n_k0) {
    fail(ErrorKind::InvalidSector, "N_k0=" + std::to_string(n_k0) + " at N=" + std::to_string(p.N) +
                                       " needs " + std::to_string(p.N - n_k0) + " background modes, got " +
                                       std::to_string(fs.count()));
  }
  const MomentumGrid grid(p.L, p.n0);
  SectorBlock blk = block_from_energy(p, slater_energy(fs, p.t, grid), n_k0);
  blk.fs = fs;
  return blk;
}

/// Eigenpair of one sector block.
///
/// Coefficients: (v0, v+, v-) for N_k0 = 1, (w-, w+, w2) for N_k0 = 2, a
/// single unit entry otherwise.
struct SectorEigenstate {
  int N = 0;
  int n_k0 = 0;
  int nu = 0;
  std::uint64_t mu = 0;
  SlaterDet fs;
  double energy = 0.0;
  int dim = 1;
  std::array<Complex, 3> coeff{};
  double n_c = 0.0;
};

/// Expected control occupation: |v0|^2, |w-|^2 + |w+|^2, 0 or 1 for the 1x1 sectors.
inline double control_occupation(const SectorEigenstate& s) {
  switch (s.n_k0) {
    case 0: return 0.0;
    case 1: return std::norm(s.coeff[0]);
    case 2: return std::norm(s.coeff[0]) + std::norm(s.coeff[1]);
    case 3: return 1.0;
  }
  return 0.0;
}

/// Real 3 x 3 eigen-decomposition used on the hot paths.
inline SmallEigen<double, 3> eigh3_real(const SmallMatrix<double, 3>& m) { return jacobi_eigh<double, 3>(m); }

inline std::vector<SectorEigenstate> diagonalize_block(const SectorBlock& blk, int N = 0, std::uint64_t mu = 0) {
  std::vector<SectorEigenstate> out;
  auto base = [&](int nu) {
    SectorEigenstate s;
    s.N = N;
    s.n_k0 = blk.n_k0;
    s.nu = nu;
    s.mu = mu;
    s.fs = blk.fs;
    s.dim = blk.dim;
    return s;
  };
  if (blk.dim == 1) {
    auto s = base(0);
    s.energy = blk.matrix[0][0].real();
    s.coeff = {Complex(1.0), Complex(0.0), Complex(0.0)};
    s.n_c = control_occupation(s);
    out.push_back(s);
    return out;
  }
  bool real = true;
  for (const auto& row : blk.matrix)
    for (const auto& x : row) real = real && x.imag() == 0.0;
  if (real) {
    SmallMatrix<double, 3> m{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = blk.matrix[i][j].real();
    const auto eig = eigh3_real(m);
    for (int nu = 0; nu < 3; ++nu) {
      auto s = base(nu);
      s.energy = eig.values[nu];
      for (int i = 0; i < 3; ++i) s.coeff[i] = eig.vectors[nu][i];
      s.n_c = control_occupation(s);
      out.push_back(s);
    }
  } else {
    const auto eig = jacobi_eigh<Complex, 3>(blk.matrix);
    for (int nu = 0; nu < 3; ++nu) {
      auto s = base(nu);
      s.energy = eig.values[nu];
      s.coeff = eig.vectors[nu];
      s.n_c = control_occupation(s);
      out.push_back(s);
    }
  }
  return out;
}

/// Visits every eigenstate at filling p.N, ordered by N_k0, then mu, then nu.
template <class F>
void for_each_sector_state(const ModelParams& p, F&& f) {
  p.validate(true);
  const MomentumGrid grid(p.L, p.n0);
  for (int n_k0 = 0; n_k0 <= 3; ++n_k0) {
    const int m = p.N - n_k0;
    if (m < 0 || m > p.L - 1) continue;
    const FsStream stream(grid, p.t, m, FsStrategy::PerDeterminant);
    stream.visit(0, stream.size(), [&](const FsTerm& term) {
      SectorBlock blk = block_from_energy(p, term.energy, n_k0);
      blk.fs = term.fs;
      for (const auto& s : diagonalize_block(blk, p.N, term.index)) f(s);
    });
  }
}

/// All eigenvalues of sector n_k0 at filling p.N (ascending).
inline std::vector<double> sector_spectrum(const ModelParams& p, int n_k0) {
  p.validate(true);
  const MomentumGrid grid(p.L, p.n0);
  std::vector<double> out;
  const int m = p.N - n_k0;
  if (m < 0 || m > p.L - 1) return out;
  const FsStream stream(grid, p.t, m, FsStrategy::PerDeterminant);
  stream.visit(0, stream.size(), [&](const FsTerm& term) {
    for (const auto& s : diagonalize_block(block_from_energy(p, term.energy, n_k0))) out.push_back(s.energy);
  });
  std::sort(out.begin(), out.end());
  return out;
}

/// Logical gap and the separation of the logical pair from the rest of the spectrum.
struct GapReport {
  ModelParams params;
  std::optional<double> delta_E;
  std::optional<double> delta_E_AH;
  std::string diagnostic;
};

namespace detail {
struct SectorExtrema {
  bool any = false;
  double min_nu0 = std::numeric_limits<double>::infinity();
  double max_nu0 = -std::numeric_limits<double>::infinity();
  double min_nu1 = std::numeric_limits<double>::infinity();
};

inline SectorExtrema sector_extrema(const ModelParams& p, int N, int n_k0) {
  SectorExtrema out;
  const int m = N - n_k0;
  if (m < 0 || m > p.L - 1) return out;
  const MomentumGrid grid(p.L, p.n0);
  const BlockKernel kernel(p);
  const FsStream stream(grid, p.t, m, FsStrategy::EnergyClasses);
  stream.visit(0, stream.size(), [&](const FsTerm& term) {
    out.any = true;
    double e0 = 0.0, e1 = std::numeric_limits<double>::infinity();
    if (n_k0 == 0) {
      e0 = kernel.sector0(term.energy);
    } else if (n_k0 == 3) {
      e0 = kernel.sector3(term.energy);
    } else {
      const auto b = kernel.k0(term.energy);
      const auto eig = eigh3_real(n_k0 == 1 ? kernel.sector1(term.energy, b) : kernel.sector2(term.energy, b));
      e0 = eig.values[0];
      e1 = eig.values[1];
    }
    out.min_nu0 = std::min(out.min_nu0, e0);
    out.max_nu0 = std::max(out.max_nu0, e0);
    out.min_nu1 = std::min(out.min_nu1, e1);
  });
  return out;
}
}  // namespace detail

/// Gaps between the lowest clusters:
///   dE    = min_mu E_0mu(N+1, 2) - max_mu E_0mu(N, 1)
///   dE_AH = min(min_{mu, N_k0=0,3} E_0mu(N+1), min_{mu, N_k0=1,2} E_1mu(N+1))
///           - max_{mu, N_k0=1,2} E_0mu(N)
inline GapReport logical_gap(const ModelParams& p, int N) {
  GapReport r;
  r.params = p;
  r.params.N = N;
  r.params.validate(true);
  if (N + 1 > p.L + 2) fail(ErrorKind::InvalidFilling, "filling N+1 is not admissible");

  const auto up2 = detail::sector_extrema(p, N + 1, 2);
  const auto lo1 = detail::sector_extrema(p, N, 1);
  if (up2.any && lo1.any) {
    r.delta_E = up2.min_nu0 - lo1.max_nu0;
  } else {
    r.diagnostic += up2.any ? "dE undefined: sector N_k0=1 is empty at N; " : "dE undefined: sector N_k0=2 is empty at N+1; ";
  }

  double upper_min = std::numeric_limits<double>::infinity();
  for (int n : {0, 3}) {
    const auto e = detail::sector_extrema(p, N + 1, n);
    if (e.any) upper_min = std::min(upper_min, e.min_nu0);
  }
  for (int n : {1, 2}) {
    const auto e = detail::sector_extrema(p, N + 1, n);
    if (e.any) upper_min = std::min(upper_min, e.min_nu1);
  }
  double lower_max = -std::numeric_limits<double>::infinity();
  const auto lo2 = detail::sector_extrema(p, N, 2);
  if (lo1.any) lower_max = std::max(lower_max, lo1.max_nu0);
  if (lo2.any) lower_max = std::max(lower_max, lo2.max_nu0);
  if (std::isfinite(upper_min) && std::isfinite(lower_max)) {
    r.delta_E_AH = upper_min - lower_max;
  } else {
    r.diagnostic += "dE_AH undefined: a contributing sector is empty";
  }
  return r;
}

}  // namespace bhw
