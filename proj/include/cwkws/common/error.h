// include/cwkws/common/error.h

// Copyright 2026  The cwkws Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CWKWS_COMMON_ERROR_H_
#define CWKWS_COMMON_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace cwkws {

/// Machine-readable failure categories. The CLI prints these as
/// `ERROR <code>: <message>`.
enum class ErrorCode {
  kNotWav,
  kUnsupportedFormat,
  kTruncated,
  kEmptyAudio,
  kBadInterval,
  kMissingAudio,
  kUnknownSubword,
  kTooShort,
  kShapeMismatch,
  kBadTarget,
  kEmptyFeatures,
  kMissingSource,
  kDivergedLoss,
  kInsufficientDomains,
  kEmptyTrace,
  kZeroHours,
  kNoPositives,
  kEmptyCorpus,
  kIoError,
  kInvalidConfig,
  kParseError,
};

std::string_view ErrorCodeName(ErrorCode code);

/// True for codes that describe bad user input rather than a failure while
/// running (CLI exit status 1 vs 2).
bool IsValidationError(ErrorCode code);

class KwsError : public std::runtime_error {
 public:
  KwsError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw KwsError(code, message);
}

}  // namespace cwkws

#endif  // CWKWS_COMMON_ERROR_H_
