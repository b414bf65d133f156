// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bhw/errors.hpp"

namespace bhw {

/// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  void add(const CompensatedSum& other) {
    add(other.sum);
    add(other.carry);
  }
  void scale(double f) {
    sum *= f;
    carry *= f;
  }
  double value() const { return sum + carry; }
};

/// Streaming mean and central moments up to fourth order with an exact
/// pairwise merge (Pebay 2008), so chunked parallel reductions reproduce
/// the sequential result up to rounding.
struct RunningStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;

  void add(double x) {
    const double n1 = static_cast<double>(n);
    ++n;
    const double nn = static_cast<double>(n);
    const double delta = x - mean;
    const double dn = delta / nn;
    const double dn2 = dn * dn;
    const double term1 = delta * dn * n1;
    mean += dn;
    m4 += term1 * dn2 * (nn * nn - 3.0 * nn + 3.0) + 6.0 * dn2 * m2 - 4.0 * dn * m3;
    m3 += term1 * dn * (nn - 2.0) - 3.0 * dn * m2;
    m2 += term1;
  }

  void merge(const RunningStats& b) {
    if (b.n == 0) return;
    if (n == 0) {
      *this = b;
      return;
    }
    const double na = static_cast<double>(n), nb = static_cast<double>(b.n);
    const double nt = na + nb;
    const double delta = b.mean - mean;
    const double d2 = delta * delta;
    const double new_mean = mean + delta * nb / nt;
    const double new_m2 = m2 + b.m2 + d2 * na * nb / nt;
    const double new_m3 = m3 + b.m3 + d2 * delta * na * nb * (na - nb) / (nt * nt) +
                          3.0 * delta * (na * b.m2 - nb * m2) / nt;
    const double new_m4 = m4 + b.m4 + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (nt * nt * nt) +
                          6.0 * d2 * (na * na * b.m2 + nb * nb * m2) / (nt * nt) +
                          4.0 * delta * (na * b.m3 - nb * m3) / nt;
    n += b.n;
    mean = new_mean;
    m2 = new_m2;
    m3 = new_m3;
    m4 = new_m4;
  }

  /// Unbiased sample variance.
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double stddev() const { return std::sqrt(variance()); }
  double standard_error() const { return n > 0 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }

  /// Large-sample standard error of the sample variance, sqrt((mu4 - s^4 (n-3)/(n-1)) / n).
  double variance_standard_error() const {
    if (n < 4) return 0.0;
    const double nn = static_cast<double>(n);
    const double mu4 = m4 / nn;
    const double s2 = variance();
    const double v = (mu4 - s2 * s2 * (nn - 3.0) / (nn - 1.0)) / nn;
    return v > 0.0 ? std::sqrt(v) : 0.0;
  }
};

/// Ordinary least-squares line y = intercept + slope * x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_se = 0.0;
  std::size_t points = 0;
};

inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) fail(ErrorKind::InvalidParameter, "linear fit needs >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) fail(ErrorKind::InvalidParameter, "linear fit with constant abscissa");
  LinearFit f;
  f.points = x.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  const double ss_res = std::max(0.0, syy - f.slope * sxy);
  f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  f.slope_se = x.size() > 2 ? std::sqrt(ss_res / (n - 2.0) / sxx) : 0.0;
  return f;
}

/// Fit of log|y| against log x. Non-positive inputs are rejected.
inline LinearFit log_log_fit(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(std::abs(y[i]) > 0.0)) fail(ErrorKind::InvalidParameter, "log-log fit needs nonzero data");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(std::abs(y[i])));
  }
  return linear_fit(lx, ly);
}

}  // namespace bhw
