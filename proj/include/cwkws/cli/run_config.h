// include/cwkws/cli/run_config.h

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

#ifndef CWKWS_CLI_RUN_CONFIG_H_
#define CWKWS_CLI_RUN_CONFIG_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cwkws/detector/detector.h"
#include "cwkws/pipeline/dataset.h"
#include "cwkws/pipeline/train.h"

namespace cwkws {

// Plain-text run configuration: "key = value" per line, '#' starts a
// comment. Unknown and repeated keys are rejected. Relative paths are taken
// from the directory holding the file.
//
//   work_dir = work
//   train_manifest = train/manifest.jsonl
//   setup = real+all
//   epochs = 25
struct RunConfig {
  std::filesystem::path base_dir;

  std::filesystem::path work_dir = "work";
  std::filesystem::path train_manifest;
  std::filesystem::path train_alignments;
  std::filesystem::path synthetic_manifest;
  std::filesystem::path test_real_manifest;
  std::filesystem::path test_cw_manifest;
  std::filesystem::path domain_checkpoint;  // default: <work_dir>/models/domain.ckpt

  DatasetOptions dataset;
  TrainConfig train;
  DomainTrainConfig domain;
  std::size_t domain_per_domain = 200;
  DetectionConfig detection;
  std::vector<std::string> sets = {"real", "real+cw"};
  std::vector<double> fa = {1.0, 20.0};

  /// Applies one key; throws kInvalidConfig on an unknown key or bad value.
  void Set(const std::string& key, const std::string& value);
  /// Throws kInvalidConfig when a section is inconsistent.
  void Validate() const;

  std::filesystem::path Resolve(const std::filesystem::path& p) const;
  std::filesystem::path ModelsDir() const { return Resolve(work_dir) / "models"; }
  std::filesystem::path DomainCheckpoint() const;
};

/// Throws kParseError on a line without '=', kInvalidConfig on unknown or
/// repeated keys.
RunConfig ParseRunConfig(std::istream& in, const std::filesystem::path& base_dir);
/// Throws kMissingSource when the file does not exist.
RunConfig LoadRunConfig(const std::filesystem::path& path);

/// Comma-separated list; empty items rejected.
std::vector<std::string> SplitList(const std::string& s);
std::vector<double> ParseDoubleList(const std::string& s);

/// The test-set names understood by detect, eval and det.
inline const std::vector<std::string> kTestSetNames = {"real", "real+cw"};

}  // namespace cwkws

#endif  // CWKWS_CLI_RUN_CONFIG_H_
