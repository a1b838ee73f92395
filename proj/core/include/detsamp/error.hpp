// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace detsamp {

enum class ErrorCode {
  InvalidInput,
  InvalidShape,
  NotSymmetric,
  NotOrthonormal,
  NoConvergence,
  DegeneratePivot,
  NormalizationLoss,
  SamplingFailed,
  ZeroWeightStart,
  SingularStart,
  IllConditioned,
  DegenerateFilling,
  AllZeroWeights,
  DimensionMismatch,
  EmptyCandidates,
  SeriesTooShort,
  ZeroVariance,
  InsufficientPositiveLags,
  TooFewTrials,
  DivisionByZero,
  NegativeEigenvalue,
  NegativeResidual,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Input-side errors (malformed files, shapes, parameters) as opposed to
/// numerical failures during a run.
[[nodiscard]] constexpr bool is_input_error(ErrorCode code) noexcept {
  return code == ErrorCode::InvalidInput || code == ErrorCode::InvalidShape ||
         code == ErrorCode::NotSymmetric || code == ErrorCode::NotOrthonormal ||
         code == ErrorCode::DimensionMismatch || code == ErrorCode::EmptyCandidates;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace detsamp
