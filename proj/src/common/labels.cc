// src/common/labels.cc

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

#include "cwkws/common/labels.h"

#include <string>

#include "cwkws/common/error.h"

namespace cwkws {

std::string_view LabelName(Label label) {
  return label == Label::kPositive ? "positive" : "negative";
}

Label ParseLabel(std::string_view name) {
  if (name == "positive") return Label::kPositive;
  if (name == "negative") return Label::kNegative;
  Fail(ErrorCode::kParseError, "unknown label '" + std::string(name) + "'");
}

std::string_view DomainName(Domain domain) {
  switch (domain) {
    case Domain::kReal: return "real";
    case Domain::kConcat: return "concat";
    case Domain::kSynthetic: return "synthetic";
  }
  return "real";
}

Domain ParseDomain(std::string_view name) {
  if (name == "real") return Domain::kReal;
  if (name == "concat") return Domain::kConcat;
  if (name == "synthetic") return Domain::kSynthetic;
  Fail(ErrorCode::kParseError, "unknown domain '" + std::string(name) + "'");
}

}  // namespace cwkws
