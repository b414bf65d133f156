// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <string>

#include "bhw/errors.hpp"

namespace bhw {

inline constexpr int kMaxBinomialN = 64;

namespace detail {
inline constexpr auto make_pascal() {
  std::array<std::array<std::uint64_t, kMaxBinomialN + 1>, kMaxBinomialN + 1> c{};
  for (int n = 0; n <= kMaxBinomialN; ++n) {
    c[n][0] = 1;
    for (int k = 1; k <= n; ++k) {
      // C(64, 32) is about 1.8e18 and still fits in 64 bits.
      c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
    }
  }
  return c;
}
inline constexpr auto kPascal = make_pascal();
}  // namespace detail

/// Exact binomial coefficient; zero outside 0 <= k <= n.
constexpr std::uint64_t binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (n > kMaxBinomialN) fail(ErrorKind::Size, "binomial(" + std::to_string(n) + ", k) exceeds table");
  return detail::kPascal[n][k];
}

/// The k-subset of {0..n-1} with the given rank when subsets are ordered by
/// their bitmask value (colexicographic order). Returned as a bitmask.
inline std::uint64_t unrank_combination(int n, int k, std::uint64_t rank) {
  if (rank >= binomial(n, k)) fail(ErrorKind::InvalidParameter, "combination rank out of range");
  std::uint64_t mask = 0;
  int c = n - 1;
  for (int i = k; i >= 1; --i) {
    while (binomial(c, i) > rank) --c;
    mask |= std::uint64_t{1} << c;
    rank -= binomial(c, i);
    --c;
  }
  return mask;
}

/// Inverse of unrank_combination.
inline std::uint64_t rank_combination(std::uint64_t mask) {
  std::uint64_t rank = 0;
  int i = 1;
  while (mask != 0) {
    const int c = std::countr_zero(mask);
    rank += binomial(c, i++);
    mask &= mask - 1;
  }
  return rank;
}

/// Next bitmask with the same popcount (Gosper). Requires mask != 0.
constexpr std::uint64_t next_combination(std::uint64_t mask) {
  const std::uint64_t u = mask & (~mask + 1);
  const std::uint64_t v = mask + u;
  return v + (((v ^ mask) / u) >> 2);
}

}  // namespace bhw
