// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bhw/errors.hpp"

namespace bhw {

// CODATA 2018 exact SI values.
inline constexpr double kPlanck = 6.62607015e-34;       // J s
inline constexpr double kBoltzmann = 1.380649e-23;      // J / K
inline constexpr double kHbar = kPlanck / (2.0 * std::numbers::pi);
inline constexpr double kElectronMass = 9.1093837015e-31;  // kg

/// h / k_B in millikelvin per gigahertz, about 47.9924 mK/GHz.
inline constexpr double kMillikelvinPerGHzFrequency = kPlanck / kBoltzmann * 1e9 * 1e3;
/// hbar / k_B in millikelvin per (angular) gigahertz, about 7.6382 mK/GHz.
inline constexpr double kMillikelvinPerGHzAngular = kHbar / kBoltzmann * 1e9 * 1e3;

/// How an energy quoted in GHz converts to a temperature.
///
/// `frequency` reads E = h*nu, `angular` reads E = hbar*omega. The library
/// default is `angular`; see the README for why.
struct UnitSystem {
  enum class Convention { Frequency, Angular, Custom };

  Convention convention = Convention::Angular;
  double millikelvin_per_ghz = kMillikelvinPerGHzAngular;

  static UnitSystem frequency() { return {Convention::Frequency, kMillikelvinPerGHzFrequency}; }
  static UnitSystem angular() { return {Convention::Angular, kMillikelvinPerGHzAngular}; }
  static UnitSystem custom(double mk_per_ghz) {
    if (!(mk_per_ghz > 0.0) || !std::isfinite(mk_per_ghz)) {
      fail(ErrorKind::InvalidParameter, "conversion constant must be positive and finite");
    }
    return {Convention::Custom, mk_per_ghz};
  }

  static UnitSystem from_name(const std::string& name) {
    if (name == "angular" || name == "hbar") return angular();
    if (name == "frequency" || name == "h") return frequency();
    fail(ErrorKind::Config, "unknown energy convention '" + name + "' (expected angular or frequency)");
  }

  std::string name() const {
    switch (convention) {
      case Convention::Frequency: return "frequency";
      case Convention::Angular: return "angular";
      case Convention::Custom: return "custom";
    }
    return "custom";
  }
};

/// Inverse temperature in 1/GHz for a temperature in millikelvin.
/// An infinite temperature maps to beta = 0.
inline double beta(double T_mK, const UnitSystem& units = UnitSystem{}) {
  if (std::isnan(T_mK) || T_mK <= 0.0) {
    fail(ErrorKind::InvalidTemperature, "temperature must be > 0 mK, got " + std::to_string(T_mK));
  }
  if (std::isinf(T_mK)) return 0.0;
  return units.millikelvin_per_ghz / T_mK;
}

}  // namespace bhw
