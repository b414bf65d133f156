// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bhw/combinatorics.hpp"
#include "bhw/errors.hpp"
#include "bhw/hermitian.hpp"
#include "bhw/model.hpp"
#include "bhw/units.hpp"

namespace bhw {

/// Particle statistics used by the brute-force oracle.
///
/// `HardcoreBoson` realizes the lattice model literally. `LadderFermion`
/// realizes the projected ladder form on which the block solution is built:
/// spinless fermions with periodic ring boundary conditions, and ring hopping
/// multiplied by (1 - 2 n_center / L).
enum class Statistics { HardcoreBoson, LadderFermion };

inline std::string to_string(Statistics s) { return s == Statistics::HardcoreBoson ? "hardcore-boson" : "ladder-fermion"; }

inline Statistics statistics_from_name(const std::string& name) {
  if (name == "hardcore-boson" || name == "hardcore") return Statistics::HardcoreBoson;
  if (name == "ladder-fermion" || name == "ladder") return Statistics::LadderFermion;
  fail(ErrorKind::Config, "unknown oracle statistics '" + name + "'");
}

inline constexpr std::size_t kDefaultDimensionCap = 200000;

/// Fixed-N occupation basis. Bit 0 is the control (if present), the next bit
/// the center, then ring sites j = 0..L-1. For fermions this bit order is the
/// operator order.
struct FockBasis {
  int L = 0;
  bool with_control = false;
  int N = 0;
  std::vector<std::uint64_t> states;

  int sites() const { return L + 1 + (with_control ? 1 : 0); }
  int control_bit() const { return 0; }
  int center_bit() const { return with_control ? 1 : 0; }
  int ring_bit(int j) const { return center_bit() + 1 + j; }
  std::size_t dimension() const { return states.size(); }

  std::optional<std::size_t> index_of(std::uint64_t s) const {
    const auto it = std::lower_bound(states.begin(), states.end(), s);
    if (it == states.end() || *it != s) return std::nullopt;
    return static_cast<std::size_t>(it - states.begin());
  }
};

inline FockBasis make_basis(int L, bool with_control, int N, std::size_t cap = kDefaultDimensionCap) {
  FockBasis b;
  b.L = L;
  b.with_control = with_control;
  b.N = N;
  const int S = b.sites();
  if (N < 0 || N > S) fail(ErrorKind::InvalidFilling, "N outside [0, sites]");
  const std::uint64_t dim = binomial(S, N);
  if (dim > cap) {
    fail(ErrorKind::Size, "Fock dimension " + std::to_string(dim) + " exceeds the cap of " + std::to_string(cap));
  }
  b.states.reserve(dim);
  std::uint64_t mask = N == 0 ? 0 : (std::uint64_t{1} << N) - 1;
  for (std::uint64_t i = 0; i < dim; ++i) {
    b.states.push_back(mask);
    if (N > 0) mask = next_combination(mask);
  }
  return b;
}

struct DenseHamiltonian {
  Eigen::MatrixXcd H;
  FockBasis basis;
  ModelParams params;
  Statistics statistics = Statistics::HardcoreBoson;
};

struct HamiltonianExtras {
  std::span<const double> hopping_disorder;  // delta s_j added to s, length L
  std::span<const double> onsite;            // on-site energies, length = sites, in bit order
  std::size_t cap = kDefaultDimensionCap;
};

namespace detail {
/// a_i^dag a_j on basis state s. Returns the new state and its sign, or nothing.
inline std::optional<std::pair<std::uint64_t, double>> hop(std::uint64_t s, int i, int j, Statistics stats) {
  const std::uint64_t bi = std::uint64_t{1} << i, bj = std::uint64_t{1} << j;
  if (i == j) {
    if (!(s & bi)) return std::nullopt;
    return std::make_pair(s, 1.0);
  }
  if (!(s & bj) || (s & bi)) return std::nullopt;
  double sign = 1.0;
  if (stats == Statistics::LadderFermion) {
    const std::uint64_t s1 = s & ~bj;
    int swaps = std::popcount(s & (bj - 1)) + std::popcount(s1 & (bi - 1));
    sign = (swaps % 2 == 0) ? 1.0 : -1.0;
  }
  return std::make_pair((s & ~bj) | bi, sign);
}
}  // namespace detail

/// Real-space Hamiltonian of the wheel (optionally with the control qubit):
///   -t sum_j (a_j^dag a_{j+1} + h.c.) - sum_j (s + ds_j) (e^{i k0 j} a_j^dag a_center + h.c.)
///   + s' (a_center^dag a_control + h.c.) + mu_c n_control.
inline DenseHamiltonian build_hamiltonian(const ModelParams& p, bool with_control, int N,
                                          Statistics stats = Statistics::HardcoreBoson,
                                          const HamiltonianExtras& extras = {}) {
  if (p.L < 3) fail(ErrorKind::InvalidGeometry, "L must be >= 3");
  if (p.n0 < 0 || p.n0 >= p.L) fail(ErrorKind::InvalidGeometry, "n0 must lie in [0, L)");
  if (!extras.hopping_disorder.empty() && static_cast<int>(extras.hopping_disorder.size()) != p.L) {
    fail(ErrorKind::InvalidParameter, "hopping disorder must have L entries");
  }
  DenseHamiltonian out;
  out.params = p;
  out.params.N = N;
  out.statistics = stats;
  out.basis = make_basis(p.L, with_control, N, extras.cap);
  const auto& B = out.basis;
  if (!extras.onsite.empty() && static_cast<int>(extras.onsite.size()) != B.sites()) {
    fail(ErrorKind::InvalidParameter, "on-site disorder must have one entry per site");
  }
  const std::size_t dim = B.dimension();
  out.H = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));

  struct Term {
    int i, j;
    Complex amp;
    bool rescaled;  // ring bond multiplied by (1 - 2 n_center / L) for the ladder form
  };
  std::vector<Term> terms;
  for (int j = 0; j < p.L; ++j) {
    const int a = B.ring_bit(j), b = B.ring_bit((j + 1) % p.L);
    terms.push_back({a, b, Complex(-p.t), true});
    terms.push_back({b, a, Complex(-p.t), true});
  }
  for (int j = 0; j < p.L; ++j) {
    const double sj = p.s + (extras.hopping_disorder.empty() ? 0.0 : extras.hopping_disorder[j]);
    const long idx = (static_cast<long>(p.n0) * j) % p.L;
    const Complex amp = -sj * std::polar(1.0, kTwoPi * static_cast<double>(idx) / p.L);
    terms.push_back({B.ring_bit(j), B.center_bit(), amp, false});
    terms.push_back({B.center_bit(), B.ring_bit(j), std::conj(amp), false});
  }
  if (with_control) {
    terms.push_back({B.center_bit(), B.control_bit(), Complex(p.s_prime), false});
    terms.push_back({B.control_bit(), B.center_bit(), Complex(p.s_prime), false});
  }

  const std::uint64_t center_mask = std::uint64_t{1} << B.center_bit();
  for (std::size_t col = 0; col < dim; ++col) {
    const std::uint64_t s = B.states[col];
    double diag = 0.0;
    if (with_control && (s & 1u)) diag += p.mu_c;
    if (!extras.onsite.empty()) {
      for (int b = 0; b < B.sites(); ++b)
        if (s >> b & 1u) diag += extras.onsite[b];
    }
    out.H(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(col)) += diag;
    const double ring_factor =
        stats == Statistics::LadderFermion && (s & center_mask) ? 1.0 - 2.0 / p.L : 1.0;
    for (const auto& term : terms) {
      const auto r = detail::hop(s, term.i, term.j, stats);
      if (!r) continue;
      const auto row = B.index_of(r->first);
      if (!row) fail(ErrorKind::Structural, "hopping left the fixed-N basis");
      const double f = term.rescaled ? ring_factor : 1.0;
      out.H(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col)) += term.amp * (r->second * f);
    }
  }
  const double herm = (out.H - out.H.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-13) fail(ErrorKind::Structural, "assembled Hamiltonian is not Hermitian (" + std::to_string(herm) + ")");
  return out;
}

/// Writes the nonzero entries as "row col re im" lines.
inline void write_triplets(const Eigen::MatrixXcd& H, const std::filesystem::path& path) {
  std::ofstream os(path);
  os << std::setprecision(17);
  for (Eigen::Index c = 0; c < H.cols(); ++c)
    for (Eigen::Index r = 0; r < H.rows(); ++r)
      if (H(r, c) != Complex(0.0)) os << r << ' ' << c << ' ' << H(r, c).real() << ' ' << H(r, c).imag() << '\n';
}

struct SpectrumResult {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;  // columns; empty unless requested
  double max_residual = 0.0;
};

inline SpectrumResult full_spectrum(const Eigen::MatrixXcd& H, bool want_vectors = false) {
  SpectrumResult r;
  if (H.rows() == 0) return r;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    const auto dump = std::filesystem::temp_directory_path() / "bhw_failed_matrix.txt";
    write_triplets(H, dump);
    fail(ErrorKind::Numerical, "dense eigensolver did not converge; matrix written to " + dump.string());
  }
  r.values = es.eigenvalues();
  if (want_vectors) {
    r.vectors = es.eigenvectors();
    const double scale = std::max(1.0, H.cwiseAbs().maxCoeff() * static_cast<double>(H.rows()));
    for (Eigen::Index k = 0; k < H.cols(); ++k) {
      const double res = (H * r.vectors.col(k) - r.values(k) * r.vectors.col(k)).norm();
      r.max_residual = std::max(r.max_residual, res);
    }
    if (r.max_residual > 1e-10 * scale) {
      const auto dump = std::filesystem::temp_directory_path() / "bhw_failed_matrix.txt";
      write_triplets(H, dump);
      fail(ErrorKind::Numerical, "eigenvector residual too large; matrix written to " + dump.string());
    }
  }
  return r;
}

inline SpectrumResult full_spectrum(const DenseHamiltonian& H, bool want_vectors = false) {
  return full_spectrum(H.H, want_vectors);
}

struct Offender {
  std::size_t index = 0;
  double analytic = 0.0;
  double oracle = 0.0;
  double deviation = 0.0;
};

struct ComparisonReport {
  std::size_t count = 0;
  double max_abs = 0.0;
  double mean_abs = 0.0;
  std::vector<Offender> worst;  // up to five, largest first
};

/// Sorted pairing of two multisets of eigenvalues.
inline ComparisonReport compare_spectra(std::vector<double> analytic, std::vector<double> oracle) {
  if (analytic.size() != oracle.size()) {
    fail(ErrorKind::Structural, "spectrum sizes differ: analytic " + std::to_string(analytic.size()) + " vs oracle " +
                                    std::to_string(oracle.size()));
  }
  std::sort(analytic.begin(), analytic.end());
  std::sort(oracle.begin(), oracle.end());
  ComparisonReport rep;
  rep.count = analytic.size();
  std::vector<Offender> all;
  double sum = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double d = std::abs(analytic[i] - oracle[i]);
    sum += d;
    rep.max_abs = std::max(rep.max_abs, d);
    all.push_back({i, analytic[i], oracle[i], d});
  }
  rep.mean_abs = analytic.empty() ? 0.0 : sum / static_cast<double>(analytic.size());
  std::stable_sort(all.begin(), all.end(), [](const Offender& a, const Offender& b) { return a.deviation > b.deviation; });
  all.resize(std::min<std::size_t>(5, all.size()));
  rep.worst = all;
  return rep;
}

/// Matrix of a one-body operator sum_{ij} M_ij a_i^dag a_j on the basis.
inline Eigen::MatrixXcd one_body_operator(const FockBasis& B, const Eigen::MatrixXcd& M, Statistics stats) {
  const std::size_t dim = B.dimension();
  Eigen::MatrixXcd O = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t col = 0; col < dim; ++col) {
    for (int i = 0; i < B.sites(); ++i) {
      for (int j = 0; j < B.sites(); ++j) {
        if (M(i, j) == Complex(0.0)) continue;
        const auto r = detail::hop(B.states[col], i, j, stats);
        if (!r) continue;
        const auto row = B.index_of(r->first);
        O(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col)) += M(i, j) * r->second;
      }
    }
  }
  return O;
}

/// Single-particle matrix of the number operator of ring momentum k_n in bit order.
inline Eigen::MatrixXcd momentum_number_kernel(const FockBasis& B, int n) {
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(B.sites(), B.sites());
  for (int j = 0; j < B.L; ++j) {
    for (int l = 0; l < B.L; ++l) {
      const long idx = ((static_cast<long>(n) * (j - l)) % B.L + B.L) % B.L;
      M(B.ring_bit(j), B.ring_bit(l)) = std::polar(1.0 / B.L, kTwoPi * static_cast<double>(idx) / B.L);
    }
  }
  return M;
}

/// N_k0 = n_control + n_center + n_{k0, ring}.
inline Eigen::MatrixXcd k0_number_operator(const FockBasis& B, int n0, Statistics stats) {
  Eigen::MatrixXcd M = momentum_number_kernel(B, n0);
  M(B.center_bit(), B.center_bit()) += 1.0;
  if (B.with_control) M(B.control_bit(), B.control_bit()) += 1.0;
  return one_body_operator(B, M, stats);
}

/// Eigenvalues of H grouped by the integer eigenvalues of a commuting operator Q.
struct SectorResolvedSpectrum {
  std::map<int, std::vector<double>> sectors;
  double commutator_norm = 0.0;
  double max_label_deviation = 0.0;  // distance of Q eigenvalues from integers
};

inline SectorResolvedSpectrum resolve_by_charge(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& Q) {
  SectorResolvedSpectrum out;
  out.commutator_norm = (H * Q - Q * H).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> qs(Q);
  const auto& qv = qs.eigenvalues();
  std::map<int, std::vector<Eigen::Index>> cols;
  for (Eigen::Index i = 0; i < qv.size(); ++i) {
    const int label = static_cast<int>(std::lround(qv(i)));
    out.max_label_deviation = std::max(out.max_label_deviation, std::abs(qv(i) - label));
    cols[label].push_back(i);
  }
  for (const auto& [label, idx] : cols) {
    Eigen::MatrixXcd P(Q.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) P.col(static_cast<Eigen::Index>(c)) = qs.eigenvectors().col(idx[c]);
    const Eigen::MatrixXcd Hs = P.adjoint() * H * P;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(0.5 * (Hs + Hs.adjoint()), Eigen::EigenvaluesOnly);
    std::vector<double> ev(hs.eigenvalues().data(), hs.eigenvalues().data() + hs.eigenvalues().size());
    out.sectors[label] = ev;
  }
  return out;
}

/// Thermal X-gate quantities computed by brute force in Fock space.
struct OracleThermal {
  double F = 0.0;
  double p_meas = 0.0;
  double Z = 0.0;
  double ground_energy = 0.0;
  std::size_t target_states = 0;  // lowest-branch vectors, one per background unless degenerate
};

/// Full ED of the N and N+1 particle ladder problems. The target branch is
/// found without the block solution: the (N+1)-particle N_k0 = 2 space is
/// split by a generic linear combination of the conserved ring occupations
/// n_k (k != k0), and the lowest H eigenspace is kept in every piece.
inline OracleThermal oracle_thermal(const ModelParams& p, int N, double T_mK, const UnitSystem& units = {}) {
  const Statistics stats = Statistics::LadderFermion;
  const double b = beta(T_mK, units);
  const auto HN = build_hamiltonian(p, true, N, stats);
  const auto HN1 = build_hamiltonian(p, true, N + 1, stats);
  const auto specN = full_spectrum(HN, true);

  OracleThermal out;
  out.ground_energy = specN.values.minCoeff();
  Eigen::VectorXd w(specN.values.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::exp(-b * (specN.values(i) - out.ground_energy));
  out.Z = w.sum();
  w /= out.Z;

  // c_control^dag from the N to the N+1 basis; the control is the first mode, so no sign.
  const auto& BN = HN.basis;
  const auto& BN1 = HN1.basis;
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(BN1.dimension()), static_cast<Eigen::Index>(BN.dimension()));
  for (std::size_t c = 0; c < BN.dimension(); ++c) {
    const std::uint64_t s = BN.states[c];
    if (s & 1u) continue;
    const auto row = BN1.index_of(s | 1u);
    C(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(c)) = 1.0;
  }

  const Eigen::MatrixXcd Q = k0_number_operator(BN1, p.n0, stats);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> qs(Q);
  std::vector<Eigen::Index> two;
  for (Eigen::Index i = 0; i < qs.eigenvalues().size(); ++i)
    if (std::lround(qs.eigenvalues()(i)) == 2) two.push_back(i);
  Eigen::MatrixXcd P2(Q.rows(), static_cast<Eigen::Index>(two.size()));
  for (std::size_t c = 0; c < two.size(); ++c) P2.col(static_cast<Eigen::Index>(c)) = qs.eigenvectors().col(two[c]);

  Eigen::MatrixXcd label = Eigen::MatrixXcd::Zero(BN1.sites(), BN1.sites());
  for (int n = 0; n < p.L; ++n) {
    if (n == p.n0) continue;
    label += std::sqrt(2.0 + 0.618 * n + 0.1 * n * n) * momentum_number_kernel(BN1, n);
  }
  const Eigen::MatrixXcd R = P2.adjoint() * one_body_operator(BN1, label, stats) * P2;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> rs(0.5 * (R + R.adjoint()));
  const Eigen::MatrixXcd H2 = P2.adjoint() * HN1.H * P2;

  Eigen::MatrixXcd targets(Q.rows(), 0);
  const auto& rv = rs.eigenvalues();
  Eigen::Index start = 0;
  while (start < rv.size()) {
    Eigen::Index stop = start + 1;
    while (stop < rv.size() && rv(stop) - rv(start) < 1e-8) ++stop;
    const Eigen::MatrixXcd G = rs.eigenvectors().middleCols(start, stop - start);
    const Eigen::MatrixXcd Hg = G.adjoint() * H2 * G;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hg(0.5 * (Hg + Hg.adjoint()));
    // A degenerate lowest level contributes its whole eigenspace.
    for (Eigen::Index j = 0; j < hg.eigenvalues().size(); ++j) {
      if (j > 0 && !levels_degenerate(hg.eigenvalues()(0), hg.eigenvalues()(j))) break;
      targets.conservativeResize(Eigen::NoChange, targets.cols() + 1);
      targets.col(targets.cols() - 1) = P2 * (G * hg.eigenvectors().col(j));
    }
    start = stop;
  }
  out.target_states = static_cast<std::size_t>(targets.cols());

  const Eigen::MatrixXcd excited = C * specN.vectors;       // c_c^dag |i>
  const Eigen::MatrixXcd overlaps = targets.adjoint() * excited;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    out.F += w(i) * overlaps.col(i).squaredNorm();
    out.p_meas += w(i) * excited.col(i).squaredNorm();
  }
  return out;
}

}  // namespace bhw
