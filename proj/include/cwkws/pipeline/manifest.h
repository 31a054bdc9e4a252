// include/cwkws/pipeline/manifest.h

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

#ifndef CWKWS_PIPELINE_MANIFEST_H_
#define CWKWS_PIPELINE_MANIFEST_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cwkws/common/labels.h"

namespace cwkws {

/// One line of a manifest, e.g.
///   {"utt_id":"p0001","path":"wav/p0001.wav","label":"positive",
///    "domain":"real","text":"ni hao mi ya","keyword_start_ms":212.5}
struct ManifestEntry {
  std::string utt_id;
  std::string path;  // relative to the manifest root unless absolute
  Label label = Label::kNegative;
  Domain domain = Domain::kReal;
  std::string text;
  std::optional<double> keyword_start_ms;
};

struct Manifest {
  std::filesystem::path root;
  std::vector<ManifestEntry> entries;

  std::filesystem::path Resolve(const ManifestEntry& e) const;
  std::size_t Count(Label label) const;
};

/// Line-oriented JSON. Blank lines are skipped. Throws kParseError on bad
/// records or duplicate utt_ids.
Manifest ParseManifest(std::istream& in, const std::filesystem::path& root);
/// Root defaults to the manifest's directory. Throws kMissingSource when the
/// file does not exist.
Manifest ReadManifest(const std::filesystem::path& path);
void WriteManifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);

std::string ManifestLine(const ManifestEntry& e);

}  // namespace cwkws

#endif  // CWKWS_PIPELINE_MANIFEST_H_
