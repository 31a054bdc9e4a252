// src/common/error.cc

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

#include "cwkws/common/error.h"

namespace cwkws {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotWav: return "NotWav";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kTruncated: return "Truncated";
    case ErrorCode::kEmptyAudio: return "EmptyAudio";
    case ErrorCode::kBadInterval: return "BadInterval";
    case ErrorCode::kMissingAudio: return "MissingAudio";
    case ErrorCode::kUnknownSubword: return "UnknownSubword";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kBadTarget: return "BadTarget";
    case ErrorCode::kEmptyFeatures: return "EmptyFeatures";
    case ErrorCode::kMissingSource: return "MissingSource";
    case ErrorCode::kDivergedLoss: return "DivergedLoss";
    case ErrorCode::kInsufficientDomains: return "InsufficientDomains";
    case ErrorCode::kEmptyTrace: return "EmptyTrace";
    case ErrorCode::kZeroHours: return "ZeroHours";
    case ErrorCode::kNoPositives: return "NoPositives";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

bool IsValidationError(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kParseError:
    case ErrorCode::kMissingSource:
    case ErrorCode::kMissingAudio:
    case ErrorCode::kNotWav:
    case ErrorCode::kUnsupportedFormat:
    case ErrorCode::kTruncated:
    case ErrorCode::kBadInterval:
    case ErrorCode::kUnknownSubword:
    case ErrorCode::kInsufficientDomains:
    case ErrorCode::kNoPositives:
    case ErrorCode::kEmptyCorpus:
    case ErrorCode::kZeroHours:
      return true;
    default:
      return false;
  }
}

}  // namespace cwkws
