// Copyright 2026 The MeterShare Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "metershare/error.h"

#include <string>

namespace metershare {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroInverse: return "ZeroInverse";
    case ErrorCode::kEncodingOverflow: return "EncodingOverflow";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kInsufficientShares: return "InsufficientShares";
    case ErrorCode::kInconsistentShares: return "InconsistentShares";
    case ErrorCode::kPartyMismatch: return "PartyMismatch";
    case ErrorCode::kDegreeMismatch: return "DegreeMismatch";
    case ErrorCode::kDegreeTooHigh: return "DegreeTooHigh";
    case ErrorCode::kTooManyFailures: return "TooManyFailures";
    case ErrorCode::kAlreadyFailed: return "AlreadyFailed";
    case ErrorCode::kUnknownHandle: return "UnknownHandle";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kOpenedIdInvalid: return "OpenedIdInvalid";
    case ErrorCode::kVectorLengthMismatch: return "VectorLengthMismatch";
    case ErrorCode::kIdOverflow: return "IdOverflow";
    case ErrorCode::kUnknownRow: return "UnknownRow";
    case ErrorCode::kInvalidScenario: return "InvalidScenario";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + detail),
      code_(code) {}

}  // namespace metershare
