// include/cwkws/common/labels.h

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

#ifndef CWKWS_COMMON_LABELS_H_
#define CWKWS_COMMON_LABELS_H_

#include <array>
#include <string>
#include <string_view>

namespace cwkws {

/// Class indices used by the two-way keyword classifier.
enum class Label : int { kNegative = 0, kPositive = 1 };

enum class Domain : int { kReal = 0, kConcat = 1, kSynthetic = 2 };

inline constexpr std::array<Domain, 3> kAllDomains = {Domain::kReal, Domain::kConcat,
                                                      Domain::kSynthetic};

std::string_view LabelName(Label label);
Label ParseLabel(std::string_view name);

std::string_view DomainName(Domain domain);
Domain ParseDomain(std::string_view name);

inline int ClassIndex(Label label) { return static_cast<int>(label); }

}  // namespace cwkws

#endif  // CWKWS_COMMON_LABELS_H_
