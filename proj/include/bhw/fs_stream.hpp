// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "bhw/combinatorics.hpp"
#include "bhw/model.hpp"

namespace bhw {

/// One background configuration visited by a stream.
///
/// In per-determinant mode `weight` is 1 and `index` is the determinant rank
/// (the mu label). In energy-class mode one term stands for `weight`
/// determinants that share the same energy.
struct FsTerm {
  double energy = 0.0;
  double weight = 1.0;
  SlaterDet fs;
  std::uint64_t index = 0;
};

enum class FsStrategy {
  PerDeterminant,
  EnergyClasses,
};

/// Modes grouped by energy: k and 2*pi-k are degenerate on the ring.
struct ModeClass {
  double energy = 0.0;
  int multiplicity = 0;
  std::uint64_t modes = 0;  // determinant-mode bitmask
};

inline std::vector<ModeClass> mode_classes(const MomentumGrid& grid, double t) {
  std::map<int, ModeClass> by_label;
  for (int m = 0; m < grid.mode_count(); ++m) {
    const int n = grid.grid_index(m);
    auto& cls = by_label[grid.canonical_index(n)];
    cls.energy = grid.dispersion(n, t);
    cls.multiplicity += 1;
    cls.modes |= std::uint64_t{1} << m;
  }
  std::vector<ModeClass> out;
  out.reserve(by_label.size());
  for (auto& [label, cls] : by_label) out.push_back(cls);
  return out;
}

/// Random-access stream over all determinants with m occupied modes.
///
/// Items [begin, end) can be visited independently, which is what the
/// chunked parallel folds rely on. m outside [0, L-1] yields an empty stream.
class FsStream {
 public:
  FsStream(const MomentumGrid& grid, double t, int m, FsStrategy strategy)
      : grid_(grid), t_(t), m_(m), strategy_(strategy) {
    const int modes = grid.mode_count();
    if (m < 0 || m > modes) return;
    if (strategy == FsStrategy::PerDeterminant) {
      size_ = binomial(modes, m);
      mode_energy_.resize(modes);
      for (int i = 0; i < modes; ++i) mode_energy_[i] = grid.mode_energy(i, t);
    } else {
      build_classes();
      size_ = terms_.size();
    }
  }

  std::size_t size() const { return static_cast<std::size_t>(size_); }
  int occupied_modes() const { return m_; }
  FsStrategy strategy() const { return strategy_; }

  template <class F>
  void visit(std::size_t begin, std::size_t end, F&& f) const {
    if (end > size()) end = size();
    if (begin >= end) return;
    if (strategy_ == FsStrategy::EnergyClasses) {
      for (std::size_t i = begin; i < end; ++i) f(terms_[i]);
      return;
    }
    std::uint64_t mask = unrank_combination(grid_.mode_count(), m_, begin);
    for (std::size_t i = begin; i < end; ++i) {
      FsTerm term;
      term.fs.bits = mask;
      term.index = i;
      double e = 0.0;
      for (std::uint64_t b = mask; b != 0; b &= b - 1) e += mode_energy_[std::countr_zero(b)];
      term.energy = e;
      f(term);
      if (m_ > 0 && i + 1 < end) mask = next_combination(mask);
    }
  }

  /// Total number of determinants represented (sum of weights).
  double determinant_count() const { return static_cast<double>(binomial(grid_.mode_count(), m_)); }

 private:
  void build_classes() {
    const auto classes = mode_classes(grid_, t_);
    std::vector<int> occ(classes.size(), 0);
    // Depth-first over class occupations in lexicographic order of the
    // occupation vector; energies accumulate in class order.
    std::vector<int> suffix_capacity(classes.size() + 1, 0);
    for (int c = static_cast<int>(classes.size()) - 1; c >= 0; --c) {
      suffix_capacity[c] = suffix_capacity[c + 1] + classes[c].multiplicity;
    }
    recurse(classes, suffix_capacity, 0, m_, occ);
  }

  void recurse(const std::vector<ModeClass>& classes, const std::vector<int>& cap, std::size_t c, int left,
               std::vector<int>& occ) {
    if (c == classes.size()) {
      if (left != 0) return;
      FsTerm term;
      double e = 0.0;
      double w = 1.0;
      std::uint64_t mask = 0;
      for (std::size_t i = 0; i < classes.size(); ++i) {
        if (occ[i] == 0) continue;
        e += occ[i] * classes[i].energy;
        w *= static_cast<double>(binomial(classes[i].multiplicity, occ[i]));
        std::uint64_t b = classes[i].modes;
        for (int j = 0; j < occ[i]; ++j) {
          mask |= b & (~b + 1);
          b &= b - 1;
        }
      }
      term.energy = e;
      term.weight = w;
      term.fs.bits = mask;
      term.index = terms_.size();
      terms_.push_back(term);
      return;
    }
    if (left > cap[c]) return;
    const int hi = std::min(left, classes[c].multiplicity);
    for (int n = 0; n <= hi; ++n) {
      occ[c] = n;
      recurse(classes, cap, c + 1, left - n, occ);
    }
    occ[c] = 0;
  }

  MomentumGrid grid_;
  double t_;
  int m_;
  FsStrategy strategy_;
  std::uint64_t size_ = 0;
  std::vector<double> mode_energy_;
  std::vector<FsTerm> terms_;
};

}  // namespace bhw
