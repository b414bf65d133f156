// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bhw {

/// Failure categories shared by all modules. The CLI maps them onto exit codes.
enum class ErrorKind {
  InvalidGeometry,
  InvalidFilling,
  InvalidSector,
  InvalidTemperature,
  InvalidParameter,
  Pole,
  SolverFailure,
  NumericalIntegration,
  DegenerateObjective,
  Size,
  Structural,
  Numerical,
  Config,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidGeometry: return "invalid-geometry";
    case ErrorKind::InvalidFilling: return "invalid-filling";
    case ErrorKind::InvalidSector: return "invalid-sector";
    case ErrorKind::InvalidTemperature: return "invalid-temperature";
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::Pole: return "pole";
    case ErrorKind::SolverFailure: return "solver-failure";
    case ErrorKind::NumericalIntegration: return "numerical-integration";
    case ErrorKind::DegenerateObjective: return "degenerate-objective";
    case ErrorKind::Size: return "size";
    case ErrorKind::Structural: return "structural";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for errors caused by bad inputs rather than by a failing computation.
  bool is_input_error() const noexcept {
    switch (kind_) {
      case ErrorKind::InvalidGeometry:
      case ErrorKind::InvalidFilling:
      case ErrorKind::InvalidSector:
      case ErrorKind::InvalidTemperature:
      case ErrorKind::InvalidParameter:
      case ErrorKind::Size:
      case ErrorKind::Config:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace bhw
