// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numeric>
#include <type_traits>

#include "bhw/errors.hpp"

namespace bhw {

template <class Scalar, int D>
using SmallMatrix = std::array<std::array<Scalar, D>, D>;

template <class Scalar, int D>
using SmallVector = std::array<Scalar, D>;

/// Relative threshold below which two eigenvalues count as one degenerate level.
inline constexpr double kDegeneracyTolerance = 1e-10;

inline bool levels_degenerate(double a, double b) {
  return std::abs(a - b) <= kDegeneracyTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

namespace detail {
inline double conj_of(double x) { return x; }
inline std::complex<double> conj_of(const std::complex<double>& z) { return std::conj(z); }
inline double real_of(double x) { return x; }
inline double real_of(const std::complex<double>& z) { return z.real(); }
inline double imag_of(double) { return 0.0; }
inline double imag_of(const std::complex<double>& z) { return z.imag(); }
inline double norm_of(double x) { return x * x; }
inline double norm_of(const std::complex<double>& z) { return std::norm(z); }
}  // namespace detail

/// Eigen-decomposition of a small Hermitian matrix.
/// `vectors[nu]` is the eigenvector belonging to `values[nu]`; values ascend.
template <class Scalar, int D>
struct SmallEigen {
  std::array<double, D> values{};
  std::array<SmallVector<Scalar, D>, D> vectors{};
  int sweeps = 0;
};

/// Multiplies v by a phase so that its largest-magnitude component is real
/// and positive. Among near-equal magnitudes the lowest index wins.
template <class Scalar, int D>
void fix_phase(SmallVector<Scalar, D>& v) {
  double best = 0.0;
  for (const auto& x : v) best = std::max(best, detail::norm_of(x));
  if (best == 0.0) return;
  int pivot = 0;
  for (int i = 0; i < D; ++i) {
    if (detail::norm_of(v[i]) >= best * (1.0 - 1e-12)) {
      pivot = i;
      break;
    }
  }
  const Scalar p = v[pivot];
  const Scalar phase = detail::conj_of(p) / std::sqrt(detail::norm_of(p));
  for (auto& x : v) x *= phase;
}

namespace detail {
template <class Scalar, int D>
bool lex_less(const SmallVector<Scalar, D>& a, const SmallVector<Scalar, D>& b) {
  for (int i = 0; i < D; ++i) {
    if (real_of(a[i]) != real_of(b[i])) return real_of(a[i]) < real_of(b[i]);
    if (imag_of(a[i]) != imag_of(b[i])) return imag_of(a[i]) < imag_of(b[i]);
  }
  return false;
}
}  // namespace detail

/// Cyclic Jacobi eigensolver for a Hermitian D x D matrix.
///
/// Iterates until the off-diagonal Frobenius norm drops below `tol` times the
/// full Frobenius norm. Eigenvalues are sorted ascending; eigenvalues within
/// 1e-12 of each other are ordered by their (phase-fixed) coefficient vectors.
template <class Scalar, int D>
SmallEigen<Scalar, D> jacobi_eigh(const SmallMatrix<Scalar, D>& input, double tol = 1e-13, int max_sweeps = 64) {
  using detail::conj_of;
  SmallMatrix<Scalar, D> a = input;
  SmallMatrix<Scalar, D> v{};
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) v[i][j] = Scalar(i == j ? 1.0 : 0.0);
    a[i][i] = Scalar(detail::real_of(a[i][i]));
  }

  double total = 0.0;
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) total += detail::norm_of(a[i][j]);
  const double threshold = tol * tol * total;

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < D; ++i)
      for (int j = i + 1; j < D; ++j) off += 2.0 * detail::norm_of(a[i][j]);
    if (off <= threshold) break;

    for (int p = 0; p < D; ++p) {
      for (int q = p + 1; q < D; ++q) {
        const Scalar apq = a[p][q];
        const double mag = std::sqrt(detail::norm_of(apq));
        if (mag == 0.0) continue;
        const Scalar phase = conj_of(apq) / mag;  // e^{-i phi}
        const double theta = (detail::real_of(a[q][q]) - detail::real_of(a[p][p])) / (2.0 * mag);
        const double tt = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(tt * tt + 1.0);
        const double s = tt * c;
        // G restricted to (p, q): [[c, s], [-s*phase, c*phase]].
        const Scalar gpp = Scalar(c), gpq = Scalar(s), gqp = -s * phase, gqq = c * phase;
        for (int k = 0; k < D; ++k) {
          const Scalar akp = a[k][p], akq = a[k][q];
          a[k][p] = akp * gpp + akq * gqp;
          a[k][q] = akp * gpq + akq * gqq;
        }
        for (int k = 0; k < D; ++k) {
          const Scalar apk = a[p][k], aqk = a[q][k];
          a[p][k] = conj_of(gpp) * apk + conj_of(gqp) * aqk;
          a[q][k] = conj_of(gpq) * apk + conj_of(gqq) * aqk;
        }
        a[p][q] = Scalar(0.0);
        a[q][p] = Scalar(0.0);
        a[p][p] = Scalar(detail::real_of(a[p][p]));
        a[q][q] = Scalar(detail::real_of(a[q][q]));
        for (int k = 0; k < D; ++k) {
          const Scalar vkp = v[k][p], vkq = v[k][q];
          v[k][p] = vkp * gpp + vkq * gqp;
          v[k][q] = vkp * gpq + vkq * gqq;
        }
      }
    }
  }
  if (sweep == max_sweeps) fail(ErrorKind::SolverFailure, "Jacobi eigensolver did not converge");

  SmallEigen<Scalar, D> out;
  out.sweeps = sweep;
  std::array<int, D> order{};
  std::array<SmallVector<Scalar, D>, D> cols{};
  for (int nu = 0; nu < D; ++nu) {
    order[nu] = nu;
    for (int i = 0; i < D; ++i) cols[nu][i] = v[i][nu];
    fix_phase<Scalar, D>(cols[nu]);
  }
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    const double ex = detail::real_of(a[x][x]), ey = detail::real_of(a[y][y]);
    if (std::abs(ex - ey) > 1e-12 * std::max(1.0, std::max(std::abs(ex), std::abs(ey)))) return ex < ey;
    return detail::lex_less<Scalar, D>(cols[x], cols[y]);
  });
  for (int nu = 0; nu < D; ++nu) {
    out.values[nu] = detail::real_of(a[order[nu]][order[nu]]);
    out.vectors[nu] = cols[order[nu]];
  }
  return out;
}

/// Closed-form eigenpairs of the real symmetric matrix [[a, c], [c, b]].
/// Eigenvectors have a nonnegative first component (second positive if the first vanishes).
struct SymmetricEigen2 {
  double lower = 0.0;
  double upper = 0.0;
  std::array<double, 2> lower_vector{};
  std::array<double, 2> upper_vector{};
  bool degenerate = false;
};

inline SymmetricEigen2 eigh2(double a, double b, double c) {
  SymmetricEigen2 out;
  const double mean = 0.5 * (a + b);
  const double half = 0.5 * (a - b);
  const double r = std::hypot(half, c);
  out.lower = mean - r;
  out.upper = mean + r;
  if (r == 0.0) {
    out.degenerate = true;
    out.lower_vector = {1.0, 0.0};
    out.upper_vector = {0.0, 1.0};
    return out;
  }
  const double theta = 0.5 * std::atan2(c, half);
  out.upper_vector = {std::cos(theta), std::sin(theta)};
  out.lower_vector = {-std::sin(theta), std::cos(theta)};
  auto normalize_sign = [](std::array<double, 2>& v) {
    if (v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0)) {
      v[0] = -v[0];
      v[1] = -v[1];
    }
  };
  normalize_sign(out.upper_vector);
  normalize_sign(out.lower_vector);
  return out;
}

}  // namespace bhw
