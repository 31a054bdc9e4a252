// src/features/feature_cache.cc

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

#include "cwkws/features/feature_cache.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cwkws/common/error.h"

namespace cwkws {
namespace {

void PutF64(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

}  // namespace

void WriteFeatureRecord(std::ostream& out, const std::string& utt_id,
                        const LogMelMatrix& m) {
  if (utt_id.empty() || utt_id.find_first_of(" \t\n") != std::string::npos)
    Fail(ErrorCode::kInvalidConfig, "utterance id must be non-empty without spaces");
  out << utt_id << ' ' << m.n_frames << ' ' << m.n_mels << '\n';
  for (double v : m.values) PutF64(out, v);
}

bool ReadFeatureRecord(std::istream& in, CachedFeatures& record) {
  std::string header;
  if (!std::getline(in, header)) return false;
  std::istringstream hs(header);
  std::size_t frames = 0, mels = 0;
  if (!(hs >> record.utt_id >> frames >> mels))
    Fail(ErrorCode::kParseError, "bad feature record header '" + header + "'");
  record.features = LogMelMatrix(frames, mels);
  std::vector<unsigned char> raw(frames * mels * 8);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size())
    Fail(ErrorCode::kTruncated, "feature record '" + record.utt_id + "' is truncated");
  for (std::size_t i = 0; i < frames * mels; ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(raw[i * 8 + b]) << (8 * b);
    record.features.values[i] = std::bit_cast<double>(bits);
  }
  return true;
}

void WriteFeatureCache(const std::filesystem::path& path,
                       const std::vector<CachedFeatures>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIoError, "cannot write " + path.string());
  for (const auto& r : records) WriteFeatureRecord(out, r.utt_id, r.features);
  if (!out) Fail(ErrorCode::kIoError, "short write to " + path.string());
}

std::vector<CachedFeatures> ReadFeatureCache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<CachedFeatures> out;
  CachedFeatures rec;
  while (ReadFeatureRecord(in, rec)) out.push_back(std::move(rec));
  return out;
}

}  // namespace cwkws
