// src/pipeline/manifest.cc

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

#include "cwkws/pipeline/manifest.h"

#include <fstream>
#include <set>
#include <sstream>

#include "cwkws/common/error.h"
#include "cwkws/common/file_io.h"
#include "json.hpp"

namespace cwkws {

using nlohmann::json;

std::filesystem::path Manifest::Resolve(const ManifestEntry& e) const {
  std::filesystem::path p(e.path);
  return p.is_absolute() ? p : root / p;
}

std::size_t Manifest::Count(Label label) const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.label == label;
  return n;
}

std::string ManifestLine(const ManifestEntry& e) {
  json j;
  j["utt_id"] = e.utt_id;
  j["path"] = e.path;
  j["label"] = std::string(LabelName(e.label));
  j["domain"] = std::string(DomainName(e.domain));
  if (!e.text.empty()) j["text"] = e.text;
  if (e.keyword_start_ms) j["keyword_start_ms"] = *e.keyword_start_ms;
  return j.dump();
}

Manifest ParseManifest(std::istream& in, const std::filesystem::path& root) {
  Manifest m;
  m.root = root;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "manifest line " + std::to_string(lineno);
    ManifestEntry e;
    try {
      json j = json::parse(line);
      e.utt_id = j.at("utt_id").get<std::string>();
      e.path = j.at("path").get<std::string>();
      e.label = ParseLabel(j.at("label").get<std::string>());
      e.domain = ParseDomain(j.value("domain", std::string("real")));
      e.text = j.value("text", std::string());
      if (j.contains("keyword_start_ms") && !j["keyword_start_ms"].is_null())
        e.keyword_start_ms = j["keyword_start_ms"].get<double>();
    } catch (const json::exception& ex) {
      Fail(ErrorCode::kParseError, where + ": " + ex.what());
    } catch (const KwsError& ex) {
      Fail(ErrorCode::kParseError, where + ": " + ex.what());
    }
    if (e.utt_id.empty()) Fail(ErrorCode::kParseError, where + ": empty utt_id");
    if (!seen.insert(e.utt_id).second)
      Fail(ErrorCode::kParseError, where + ": duplicate utt_id '" + e.utt_id + "'");
    if (e.keyword_start_ms && *e.keyword_start_ms < 0.0)
      Fail(ErrorCode::kParseError, where + ": negative keyword_start_ms");
    m.entries.push_back(std::move(e));
  }
  return m;
}

Manifest ReadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kMissingSource, "manifest not found: " + path.string());
  return ParseManifest(in, path.has_parent_path() ? path.parent_path() : ".");
}

void WriteManifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    out += ManifestLine(e);
    out += '\n';
  }
  WriteStringToFile(path, out);
}

}  // namespace cwkws
