// Copyright 2026 The softspace Authors
// SPDX-License-Identifier: Apache-2.0

#include "softspace/error.hpp"

namespace softspace {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "IoFailure";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::UnknownModule: return "UnknownModule";
    case ErrorCode::EmptySpace: return "EmptySpace";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::EmptyWeights: return "EmptyWeights";
    case ErrorCode::NonpositiveM: return "NonpositiveM";
    case ErrorCode::TooFewZones: return "TooFewZones";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
  }
  return "Unknown";
}

}  // namespace softspace
