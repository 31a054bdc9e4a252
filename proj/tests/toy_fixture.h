// tests/toy_fixture.h

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

#ifndef CWKWS_TESTS_TOY_FIXTURE_H_
#define CWKWS_TESTS_TOY_FIXTURE_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <unistd.h>

#include "cwkws/augment/inventory.h"
#include "cwkws/cli/toy_corpus.h"
#include "cwkws/pipeline/dataset.h"
#include "cwkws/pipeline/manifest.h"

namespace cwkws::testing {

/// Fresh empty directory under the system temp dir, unique per process.
inline std::filesystem::path ScratchDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("cwkws_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// A small toy corpus on disk, loaded the way the trainer sees it.
struct ToyWorkspace {
  std::filesystem::path dir;
  ToyCorpusSummary summary;
  Manifest real;
  Manifest synthetic;
  std::vector<SubwordSegment> alignments;
  std::unique_ptr<FileAudioStore> store;
  SubwordInventory inventory;
  std::unique_ptr<TrainingData> data;
  bool owned = false;

  ToyWorkspace(const std::string& name, double scale, std::uint64_t seed = 3) {
    dir = ScratchDir(name);
    owned = true;
    ToyCorpusOptions o;
    o.seed = seed;
    o.scale = scale;
    summary = WriteToyCorpus(dir, o);
    Load();
  }
  /// Loads a corpus already on disk; the directory is left in place.
  explicit ToyWorkspace(const std::filesystem::path& existing) : dir(existing) { Load(); }

  void Load() {
    real = ReadManifest(dir / "train" / "manifest.jsonl");
    synthetic = ReadManifest(dir / "synthetic" / "manifest.jsonl");
    alignments = ReadAlignmentTsv(dir / "train" / "alignments.tsv");
    store = std::make_unique<FileAudioStore>(real.root);
    for (const auto& e : real.entries) store->Register(e.utt_id, e.path);
    inventory = BuildInventory(alignments, *store);
    DataSources src{&real, &synthetic, &alignments, &inventory};
    data = std::make_unique<TrainingData>(DatasetOptions{}, src);
  }
  ~ToyWorkspace() {
    if (owned) std::filesystem::remove_all(dir);
  }
};

}  // namespace cwkws::testing

#endif  // CWKWS_TESTS_TOY_FIXTURE_H_
