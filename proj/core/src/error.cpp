// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#include "detsamp/error.hpp"

namespace detsamp {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::InvalidShape: return "InvalidShape";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotOrthonormal: return "NotOrthonormal";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DegeneratePivot: return "DegeneratePivot";
    case ErrorCode::NormalizationLoss: return "NormalizationLoss";
    case ErrorCode::SamplingFailed: return "SamplingFailed";
    case ErrorCode::ZeroWeightStart: return "ZeroWeightStart";
    case ErrorCode::SingularStart: return "SingularStart";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::DegenerateFilling: return "DegenerateFilling";
    case ErrorCode::AllZeroWeights: return "AllZeroWeights";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyCandidates: return "EmptyCandidates";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::InsufficientPositiveLags: return "InsufficientPositiveLags";
    case ErrorCode::TooFewTrials: return "TooFewTrials";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorCode::NegativeResidual: return "NegativeResidual";
  }
  return "Unknown";
}

}  // namespace detsamp
