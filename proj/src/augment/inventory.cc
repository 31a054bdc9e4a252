// src/augment/inventory.cc

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

#include "cwkws/augment/inventory.h"

#include <cmath>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "cwkws/common/error.h"

namespace cwkws {
namespace {

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

double ParseMs(const std::string& field, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    Fail(ErrorCode::kParseError, "alignment line " + std::to_string(line_no) +
                                     ": bad millisecond value '" + field + "'");
  }
}

}  // namespace

std::vector<SubwordSegment> ParseAlignmentTsv(std::istream& in) {
  std::vector<SubwordSegment> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line_no == 1 && line.rfind("utt_id", 0) == 0) continue;
    const auto f = SplitTabs(line);
    if (f.size() != 4)
      Fail(ErrorCode::kParseError, "alignment line " + std::to_string(line_no) +
                                       ": expected 4 tab-separated columns");
    rows.push_back({f[0], f[1], ParseMs(f[2], line_no), ParseMs(f[3], line_no)});
  }
  return rows;
}

std::vector<SubwordSegment> ReadAlignmentTsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kMissingSource, "cannot open alignment table " + path.string());
  return ParseAlignmentTsv(in);
}

void WriteAlignmentTsv(const std::filesystem::path& path,
                       const std::vector<SubwordSegment>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) Fail(ErrorCode::kIoError, "cannot write " + path.string());
  auto num = [](double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  };
  out << "utt_id\tsubword\tstart_ms\tend_ms\n";
  for (const auto& r : rows)
    out << r.utt_id << '\t' << r.subword << '\t' << num(r.start_ms) << '\t' << num(r.end_ms)
        << '\n';
}

void MemoryAudioStore::Add(const std::string& utt_id, Waveform wave) {
  waves_[utt_id] = std::make_shared<const Waveform>(std::move(wave));
}

std::shared_ptr<const Waveform> MemoryAudioStore::Load(const std::string& utt_id) const {
  auto it = waves_.find(utt_id);
  return it == waves_.end() ? nullptr : it->second;
}

void FileAudioStore::Register(const std::string& utt_id,
                              const std::filesystem::path& relative_path) {
  paths_[utt_id] = relative_path;
}

std::shared_ptr<const Waveform> FileAudioStore::Load(const std::string& utt_id) const {
  if (auto it = cache_.find(utt_id); it != cache_.end()) return it->second;
  auto p = paths_.find(utt_id);
  if (p == paths_.end()) return nullptr;
  const auto full = p->second.is_absolute() ? p->second : root_ / p->second;
  if (!std::filesystem::exists(full)) return nullptr;
  auto wave = std::make_shared<const Waveform>(ReadWav(full));
  cache_[utt_id] = wave;
  return wave;
}

void SubwordInventory::Add(InventoryEntry entry) {
  entries_[entry.segment.subword].push_back(std::move(entry));
}

const std::vector<InventoryEntry>& SubwordInventory::Entries(
    const std::string& subword) const {
  auto it = entries_.find(subword);
  if (it == entries_.end() || it->second.empty())
    Fail(ErrorCode::kUnknownSubword, "no inventory segments for subword '" + subword + "'");
  return it->second;
}

std::vector<std::string> SubwordInventory::Subwords() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

std::size_t SubwordInventory::total_segments() const {
  std::size_t n = 0;
  for (const auto& [k, v] : entries_) n += v.size();
  return n;
}

SubwordInventory BuildInventory(const std::vector<SubwordSegment>& alignments,
                                const AudioStore& store) {
  SubwordInventory inv;
  for (const auto& row : alignments) {
    if (row.subword.empty())
      Fail(ErrorCode::kBadInterval, "empty subword label in " + row.utt_id);
    auto wave = store.Load(row.utt_id);
    if (!wave) Fail(ErrorCode::kMissingAudio, "no audio for utterance '" + row.utt_id + "'");
    const double duration_ms = 1000.0 * wave->duration_s();
    if (!(row.start_ms >= 0.0) || !(row.end_ms > row.start_ms) || row.end_ms > duration_ms)
      Fail(ErrorCode::kBadInterval,
           row.utt_id + "/" + row.subword + ": interval [" + std::to_string(row.start_ms) +
               ", " + std::to_string(row.end_ms) + ") ms outside (0, " +
               std::to_string(duration_ms) + "]");
    const double sr = wave->sample_rate_hz;
    auto begin = static_cast<std::size_t>(std::llround(row.start_ms * sr / 1000.0));
    auto end = static_cast<std::size_t>(std::llround(row.end_ms * sr / 1000.0));
    end = std::min(end, wave->size());
    if (end <= begin)
      Fail(ErrorCode::kBadInterval, row.utt_id + "/" + row.subword + ": empty after rounding");
    inv.Add({wave, row, begin, end});
  }
  return inv;
}

}  // namespace cwkws
