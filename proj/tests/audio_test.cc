// tests/audio_test.cc

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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <vector>

#include "cwkws/audio/wav.h"
#include "cwkws/common/error.h"
#include "cwkws/common/rng.h"

namespace cwkws {
namespace {

void PutU32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void PutU16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}

struct HeaderSpec {
  std::uint16_t format = 1;
  std::uint16_t channels = 1;
  std::uint32_t rate = 16000;
  std::uint16_t bits = 16;
  bool extra_chunk = false;
};

// Hand-assembled RIFF container; `declared` overrides the data chunk size.
std::vector<std::uint8_t> MakeWav(const std::vector<std::uint8_t>& data, HeaderSpec h = {},
                                  std::int64_t declared = -1) {
  std::vector<std::uint8_t> b = {'R', 'I', 'F', 'F'};
  PutU32(b, 0);  // patched below
  b.insert(b.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  PutU32(b, 16);
  PutU16(b, h.format);
  PutU16(b, h.channels);
  PutU32(b, h.rate);
  PutU32(b, h.rate * h.channels * h.bits / 8);
  PutU16(b, static_cast<std::uint16_t>(h.channels * h.bits / 8));
  PutU16(b, h.bits);
  if (h.extra_chunk) {
    b.insert(b.end(), {'L', 'I', 'S', 'T'});
    PutU32(b, 4);
    b.insert(b.end(), {'a', 'b', 'c', 'd'});
  }
  b.insert(b.end(), {'d', 'a', 't', 'a'});
  PutU32(b, declared >= 0 ? static_cast<std::uint32_t>(declared)
                          : static_cast<std::uint32_t>(data.size()));
  b.insert(b.end(), data.begin(), data.end());
  const auto riff = static_cast<std::uint32_t>(b.size() - 8);
  for (int i = 0; i < 4; ++i) b[4 + i] = static_cast<std::uint8_t>(riff >> (8 * i));
  return b;
}

ErrorCode DecodeError(const std::vector<std::uint8_t>& bytes) {
  try {
    DecodeWav(bytes);
  } catch (const KwsError& e) {
    return e.code();
  }
  ADD_FAILURE() << "decode did not throw";
  return ErrorCode::kIoError;
}

std::vector<std::uint8_t> DataChunk(const std::vector<std::uint8_t>& file) {
  return {file.begin() + 44, file.end()};
}

TEST(Wav, DecodesHalfScaleSample) {
  Waveform w = DecodeWav(MakeWav({0x00, 0x40}));
  ASSERT_EQ(w.samples.size(), 1u);
  EXPECT_EQ(w.samples[0], 0.5);
  EXPECT_EQ(w.sample_rate_hz, 16000);
}

TEST(Wav, DecodeDividesBy32768) {
  Waveform w = DecodeWav(MakeWav({0x00, 0x80, 0xFF, 0x7F, 0xFF, 0xFF}));
  ASSERT_EQ(w.samples.size(), 3u);
  EXPECT_EQ(w.samples[0], -1.0);
  EXPECT_EQ(w.samples[1], 32767.0 / 32768.0);
  EXPECT_EQ(w.samples[2], -1.0 / 32768.0);
}

TEST(Wav, ReadsRateAndSkipsUnknownChunks) {
  HeaderSpec h;
  h.rate = 8000;
  h.extra_chunk = true;
  Waveform w = DecodeWav(MakeWav({0x00, 0x40, 0x00, 0xC0}, h));
  EXPECT_EQ(w.sample_rate_hz, 8000);
  EXPECT_EQ(w.samples, (std::vector<double>{0.5, -0.5}));
}

TEST(Wav, EveryPcm16ValueRoundTripsByteForByte) {
  std::vector<std::uint8_t> data;
  for (int v = -32768; v <= 32767; ++v) PutU16(data, static_cast<std::uint16_t>(v));
  const auto file = MakeWav(data);
  EXPECT_EQ(DataChunk(EncodeWav(DecodeWav(file))), data);
  EXPECT_EQ(EncodeWav(DecodeWav(file)), file);
}

TEST(Wav, RejectsBadMagic) {
  auto b = MakeWav({0, 0});
  b[0] = 'X';
  EXPECT_EQ(DecodeError(b), ErrorCode::kNotWav);
  auto c = MakeWav({0, 0});
  c[8] = 'X';
  EXPECT_EQ(DecodeError(c), ErrorCode::kNotWav);
  EXPECT_EQ(DecodeError({'R', 'I'}), ErrorCode::kNotWav);
}

TEST(Wav, RejectsStereo) {
  HeaderSpec h;
  h.channels = 2;
  EXPECT_EQ(DecodeError(MakeWav({0, 0, 0, 0}, h)), ErrorCode::kUnsupportedFormat);
}

TEST(Wav, RejectsOtherDepthsAndCodecs) {
  HeaderSpec eight;
  eight.bits = 8;
  EXPECT_EQ(DecodeError(MakeWav({0, 0}, eight)), ErrorCode::kUnsupportedFormat);
  HeaderSpec flt;
  flt.format = 3;
  EXPECT_EQ(DecodeError(MakeWav({0, 0}, flt)), ErrorCode::kUnsupportedFormat);
}

TEST(Wav, RejectsShortDataChunk) {
  EXPECT_EQ(DecodeError(MakeWav({0x00, 0x40}, {}, 8)), ErrorCode::kTruncated);
}

TEST(Wav, EncodesHalfScale) {
  Waveform w;
  w.samples = {0.5};
  EXPECT_EQ(DataChunk(EncodeWav(w)), (std::vector<std::uint8_t>{0x00, 0x40}));
}

TEST(Wav, EncodeClampsAtRails) {
  Waveform w;
  w.samples = {1.0, -1.0, 3.0, -7.0};
  const auto d = DataChunk(EncodeWav(w));
  EXPECT_EQ(d, (std::vector<std::uint8_t>{0xFF, 0x7F, 0x00, 0x80, 0xFF, 0x7F, 0x00, 0x80}));
  EXPECT_EQ(QuantizePcm16(1.0), 32767);
  EXPECT_EQ(QuantizePcm16(-1.0), -32768);
}

TEST(Wav, EncodeRoundsToNearest) {
  EXPECT_EQ(QuantizePcm16(0.4 / 32768.0), 0);
  EXPECT_EQ(QuantizePcm16(0.6 / 32768.0), 1);
  EXPECT_EQ(QuantizePcm16(-0.6 / 32768.0), -1);
  EXPECT_EQ(QuantizePcm16(std::nan("")), 0);
}

TEST(Wav, EmptyWaveformGivesValidFile) {
  Waveform w;
  const auto file = EncodeWav(w);
  EXPECT_EQ(file.size(), 44u);
  EXPECT_EQ(file, MakeWav({}));
  Waveform back = DecodeWav(file);
  EXPECT_TRUE(back.samples.empty());
}

TEST(Wav, DecodedSamplesStayInRange) {
  Rng rng(3);
  Waveform w;
  for (int i = 0; i < 5000; ++i) w.samples.push_back(rng.Uniform(-2.0, 2.0));
  Waveform back = DecodeWav(EncodeWav(w));
  for (double s : back.samples) {
    EXPECT_TRUE(std::isfinite(s));
    EXPECT_GE(s, -1.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(Wav, FileRoundTripIsByteIdentical) {
  const auto dir = std::filesystem::temp_directory_path() / "cwkws_audio_test";
  std::filesystem::create_directories(dir);
  Rng rng(11);
  Waveform w;
  for (int i = 0; i < 4000; ++i) w.samples.push_back(rng.Uniform(-1.0, 1.0));
  WriteWav(dir / "a.wav", w);
  Waveform a = ReadWav(dir / "a.wav");
  WriteWav(dir / "b.wav", a);
  std::ifstream fa(dir / "a.wav", std::ios::binary), fb(dir / "b.wav", std::ios::binary);
  std::vector<char> ba((std::istreambuf_iterator<char>(fa)), {});
  std::vector<char> bb((std::istreambuf_iterator<char>(fb)), {});
  EXPECT_EQ(ba, bb);
  std::filesystem::remove_all(dir);
}

TEST(Wav, MissingFileIsReported) {
  try {
    ReadWav("/nonexistent/cwkws/x.wav");
    FAIL();
  } catch (const KwsError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingAudio);
  }
}

TEST(GaussianSegment, EmptyAndDegenerate) {
  Rng rng(1);
  EXPECT_TRUE(GaussianSegment(0, 0.1, rng).empty());
  EXPECT_EQ(GaussianSegment(5, 0.0, rng), std::vector<double>(5, 0.0));
}

TEST(GaussianSegment, MomentsMatchSigma) {
  for (std::uint64_t seed : {0ULL, 1ULL, 2ULL, 12345ULL}) {
    Rng rng(seed);
    const auto x = GaussianSegment(100000, 0.1, rng);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / (x.size() - 1));
    EXPECT_NEAR(mean, 0.0, 0.002) << "seed " << seed;
    EXPECT_NEAR(sd, 0.1, 0.002) << "seed " << seed;
  }
}

TEST(GaussianSegment, SeededStreamsAreReproducible) {
  Rng a(42), b(42), c(43);
  const auto xa = GaussianSegment(1000, 0.3, a);
  EXPECT_EQ(xa, GaussianSegment(1000, 0.3, b));
  EXPECT_NE(xa, GaussianSegment(1000, 0.3, c));
}

TEST(GaussianSegment, ClampsToUnitRange) {
  Rng rng(5);
  for (double v : GaussianSegment(10000, 5.0, rng)) {
    EXPECT_GE(v, -1.0);
    EXPECT_LE(v, 1.0);
  }
}

}  // namespace
}  // namespace cwkws
