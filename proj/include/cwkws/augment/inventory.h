// include/cwkws/augment/inventory.h

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

#ifndef CWKWS_AUGMENT_INVENTORY_H_
#define CWKWS_AUGMENT_INVENTORY_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cwkws/audio/wav.h"

namespace cwkws {

/// One row of the alignment table: subword `subword` spans
/// [start_ms, end_ms) of utterance `utt_id`.
struct SubwordSegment {
  std::string utt_id;
  std::string subword;
  double start_ms = 0.0;
  double end_ms = 0.0;
};

/// Alignment table I/O. UTF-8 TSV with columns utt_id, subword, start_ms,
/// end_ms. A first line starting with "utt_id" is treated as a header; blank
/// lines and lines starting with '#' are skipped.
std::vector<SubwordSegment> ParseAlignmentTsv(std::istream& in);
std::vector<SubwordSegment> ReadAlignmentTsv(const std::filesystem::path& path);
void WriteAlignmentTsv(const std::filesystem::path& path,
                       const std::vector<SubwordSegment>& rows);

/// Resolves utterance ids to decoded audio.
class AudioStore {
 public:
  virtual ~AudioStore() = default;
  /// nullptr when the utterance is unknown.
  virtual std::shared_ptr<const Waveform> Load(const std::string& utt_id) const = 0;
};

class MemoryAudioStore : public AudioStore {
 public:
  void Add(const std::string& utt_id, Waveform wave);
  std::shared_ptr<const Waveform> Load(const std::string& utt_id) const override;

 private:
  std::map<std::string, std::shared_ptr<const Waveform>> waves_;
};

/// Reads WAV files lazily from `root / relative_path` and keeps them cached.
/// Not thread-safe.
class FileAudioStore : public AudioStore {
 public:
  explicit FileAudioStore(std::filesystem::path root) : root_(std::move(root)) {}
  void Register(const std::string& utt_id, const std::filesystem::path& relative_path);
  std::shared_ptr<const Waveform> Load(const std::string& utt_id) const override;

 private:
  std::filesystem::path root_;
  std::map<std::string, std::filesystem::path> paths_;
  mutable std::map<std::string, std::shared_ptr<const Waveform>> cache_;
};

/// A subword cut out of a source utterance, [begin_sample, end_sample).
struct InventoryEntry {
  std::shared_ptr<const Waveform> source;
  SubwordSegment segment;
  std::size_t begin_sample = 0;
  std::size_t end_sample = 0;

  std::span<const double> samples() const {
    return {source->samples.data() + begin_sample, end_sample - begin_sample};
  }
  std::size_t length() const { return end_sample - begin_sample; }
};

class SubwordInventory {
 public:
  void Add(InventoryEntry entry);

  bool Contains(const std::string& subword) const { return entries_.count(subword) > 0; }
  /// Throws kUnknownSubword.
  const std::vector<InventoryEntry>& Entries(const std::string& subword) const;
  std::vector<std::string> Subwords() const;
  std::size_t total_segments() const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::vector<InventoryEntry>> entries_;
};

/// Cuts every alignment row out of its source audio at sample boundaries
/// round(ms * sr / 1000). Throws kMissingAudio or kBadInterval.
SubwordInventory BuildInventory(const std::vector<SubwordSegment>& alignments,
                                const AudioStore& store);

}  // namespace cwkws

#endif  // CWKWS_AUGMENT_INVENTORY_H_
