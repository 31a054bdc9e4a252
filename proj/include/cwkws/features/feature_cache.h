// include/cwkws/features/feature_cache.h

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

#ifndef CWKWS_FEATURES_FEATURE_CACHE_H_
#define CWKWS_FEATURES_FEATURE_CACHE_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cwkws/features/log_mel.h"

namespace cwkws {

// Feature cache layout, one record per utterance, records back to back:
//   "<utt_id> <n_frames> <n_mels>\n"   (ASCII header line)
//   n_frames * n_mels little-endian IEEE-754 binary64 values, frame-major.
struct CachedFeatures {
  std::string utt_id;
  LogMelMatrix features;
};

void WriteFeatureRecord(std::ostream& out, const std::string& utt_id,
                        const LogMelMatrix& m);

/// Returns false on clean end of stream; throws kParseError on a malformed
/// header and kTruncated on a short payload.
bool ReadFeatureRecord(std::istream& in, CachedFeatures& record);

void WriteFeatureCache(const std::filesystem::path& path,
                       const std::vector<CachedFeatures>& records);
std::vector<CachedFeatures> ReadFeatureCache(const std::filesystem::path& path);

}  // namespace cwkws

#endif  // CWKWS_FEATURES_FEATURE_CACHE_H_
