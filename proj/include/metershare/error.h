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

#ifndef METERSHARE_ERROR_H_
#define METERSHARE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace metershare {

enum class ErrorCode {
  kZeroInverse,
  kEncodingOverflow,
  kInvalidParams,
  kInsufficientShares,
  kInconsistentShares,
  kPartyMismatch,
  kDegreeMismatch,
  kDegreeTooHigh,
  kTooManyFailures,
  kAlreadyFailed,
  kUnknownHandle,
  kLengthMismatch,
  kOpenedIdInvalid,
  kVectorLengthMismatch,
  kIdOverflow,
  kUnknownRow,
  kInvalidScenario,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported as Error; code() names the condition.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace metershare

#endif  // METERSHARE_ERROR_H_
