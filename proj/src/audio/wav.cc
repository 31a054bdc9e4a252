// src/audio/wav.cc

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

#include "cwkws/audio/wav.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "cwkws/common/error.h"

namespace cwkws {
namespace {

std::uint32_t ReadU32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) |
         (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::uint16_t ReadU16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

bool TagIs(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void PutU16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void PutTag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

Waveform DecodeWav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !TagIs(bytes, 0, "RIFF") || !TagIs(bytes, 8, "WAVE"))
    Fail(ErrorCode::kNotWav, "missing RIFF/WAVE magic");

  bool have_fmt = false;
  int sample_rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t chunk_size = ReadU32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (TagIs(bytes, pos, "fmt ")) {
      if (chunk_size < 16 || body + 16 > bytes.size())
        Fail(ErrorCode::kTruncated, "fmt chunk shorter than 16 bytes");
      const std::uint16_t format = ReadU16(bytes, body);
      const std::uint16_t channels = ReadU16(bytes, body + 2);
      sample_rate = static_cast<int>(ReadU32(bytes, body + 4));
      const std::uint16_t bits = ReadU16(bytes, body + 14);
      if (format != 1)
        Fail(ErrorCode::kUnsupportedFormat,
             "only uncompressed PCM is supported (format tag " +
                 std::to_string(format) + ")");
      if (channels != 1)
        Fail(ErrorCode::kUnsupportedFormat,
             "expected 1 channel, got " + std::to_string(channels));
      if (bits != 16)
        Fail(ErrorCode::kUnsupportedFormat,
             "expected 16-bit samples, got " + std::to_string(bits));
      if (sample_rate <= 0)
        Fail(ErrorCode::kUnsupportedFormat, "non-positive sample rate");
      have_fmt = true;
    } else if (TagIs(bytes, pos, "data")) {
      if (!have_fmt) Fail(ErrorCode::kNotWav, "data chunk before fmt chunk");
      if (body + chunk_size > bytes.size())
        Fail(ErrorCode::kTruncated,
             "data chunk declares " + std::to_string(chunk_size) + " bytes, " +
                 std::to_string(bytes.size() - body) + " present");
      Waveform wave;
      wave.sample_rate_hz = sample_rate;
      const std::size_t n = chunk_size / 2;
      wave.samples.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        auto v = static_cast<std::int16_t>(ReadU16(bytes, body + 2 * i));
        wave.samples[i] = static_cast<double>(v) / 32768.0;
      }
      return wave;
    }
    // Chunks are word aligned.
    pos = body + chunk_size + (chunk_size & 1u);
  }
  if (!have_fmt) Fail(ErrorCode::kNotWav, "no fmt chunk");
  Fail(ErrorCode::kTruncated, "no data chunk");
}

std::int16_t QuantizePcm16(double sample) {
  if (std::isnan(sample)) return 0;
  const double q = std::round(sample * 32768.0);
  return static_cast<std::int16_t>(std::clamp(q, -32768.0, 32767.0));
}

std::vector<std::uint8_t> EncodeWav(const Waveform& wave) {
  const auto data_bytes = static_cast<std::uint32_t>(wave.samples.size() * 2);
  const auto rate = static_cast<std::uint32_t>(wave.sample_rate_hz);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_bytes);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, 1);         // PCM
  PutU16(out, 1);         // mono
  PutU32(out, rate);
  PutU32(out, rate * 2);  // byte rate
  PutU16(out, 2);         // block align
  PutU16(out, 16);
  PutTag(out, "data");
  PutU32(out, data_bytes);
  for (double s : wave.samples)
    PutU16(out, static_cast<std::uint16_t>(QuantizePcm16(s)));
  return out;
}

Waveform ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kMissingAudio, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return DecodeWav(bytes);
  } catch (const KwsError& e) {
    throw KwsError(e.code(), path.string() + ": " + e.what());
  }
}

void WriteWav(const std::filesystem::path& path, const Waveform& wave) {
  const auto bytes = EncodeWav(wave);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorCode::kIoError, "short write to " + path.string());
}

std::vector<double> GaussianSegment(std::size_t n, double sigma, Rng& rng) {
  std::vector<double> out(n);
  for (auto& v : out) v = std::clamp(sigma * rng.Normal(), -1.0, 1.0);
  return out;
}

double Rms(std::span<const double> samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (double s : samples) acc += s * s;
  return std::sqrt(acc / static_cast<double>(samples.size()));
}

}  // namespace cwkws
