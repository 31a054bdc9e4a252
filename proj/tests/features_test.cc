// tests/features_test.cc

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

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cwkws/common/error.h"
#include "cwkws/common/rng.h"
#include "cwkws/features/feature_cache.h"
#include "cwkws/features/fft.h"
#include "cwkws/features/log_mel.h"

namespace cwkws {
namespace {

constexpr int kSr = 16000;

Waveform Sine(double hz, double seconds, double amp = 1.0) {
  Waveform w;
  const auto n = static_cast<std::size_t>(seconds * kSr);
  for (std::size_t i = 0; i < n; ++i)
    w.samples.push_back(amp * std::sin(2.0 * std::numbers::pi * hz * i / kSr));
  return w;
}

Waveform Noise(std::size_t n, std::uint64_t seed, double sigma = 0.1) {
  Rng rng(seed);
  Waveform w;
  for (std::size_t i = 0; i < n; ++i) w.samples.push_back(sigma * rng.Normal());
  return w;
}

// Independent mel centre: equally spaced on 2595*log10(1+f/700) between
// 0 Hz and Nyquist, endpoints excluded.
double OracleCenterHz(std::size_t m, std::size_t n_mels, double sr) {
  const double top = 2595.0 * std::log10(1.0 + (sr / 2) / 700.0);
  const double mel = top * static_cast<double>(m + 1) / static_cast<double>(n_mels + 1);
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

TEST(FrameCount, Examples) {
  FrameSpec spec;
  EXPECT_EQ(FrameCount(16000, kSr, spec), 77u);
  EXPECT_EQ(FrameCount(799, kSr, spec), 0u);
  EXPECT_EQ(FrameCount(800, kSr, spec), 1u);
  EXPECT_EQ(FrameCount(32000, kSr, spec), 157u);
  EXPECT_EQ(FrameCount(0, kSr, spec), 0u);
}

TEST(FrameCount, MonotoneInLength) {
  FrameSpec spec;
  std::size_t prev = 0;
  for (std::size_t n = 0; n < 5000; ++n) {
    const std::size_t c = FrameCount(n, kSr, spec);
    EXPECT_GE(c, prev);
    EXPECT_EQ(c, n < 800 ? 0 : (n - 800) / 200 + 1);
    prev = c;
  }
}

TEST(FrameSpec, RejectsBadGeometry) {
  FrameSpec s;
  s.shift_ms = 60.0;
  EXPECT_THROW(s.Validate(kSr), KwsError);
  FrameSpec t;
  t.fft_size = 512;  // smaller than 800 samples
  EXPECT_THROW(t.Validate(kSr), KwsError);
  FrameSpec u;
  u.fft_size = 1000;
  EXPECT_THROW(u.Validate(kSr), KwsError);
  FrameSpec v;
  v.n_mels = 0;
  EXPECT_THROW(v.Validate(kSr), KwsError);
  EXPECT_NO_THROW(FrameSpec{}.Validate(kSr));
}

TEST(Fft, MatchesNaiveDft) {
  Rng rng(2);
  for (std::size_t n : {2u, 8u, 64u, 1024u}) {
    std::vector<std::complex<double>> x(n), y(n);
    for (auto& v : x) v = {rng.Normal(), rng.Normal()};
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t t = 0; t < n; ++t)
        y[k] += x[t] * std::polar(1.0, -2.0 * std::numbers::pi * double(k * t % n) / double(n));
    Fft fft(n);
    fft.Forward(x);
    for (std::size_t k = 0; k < n; ++k) EXPECT_LT(std::abs(x[k] - y[k]), 1e-9 * n) << n << " " << k;
  }
}

TEST(MelFilterbank, RowsArePositiveTriangles) {
  FrameSpec spec;
  const MelFilterbank fb = MakeMelFilterbank(spec, kSr);
  ASSERT_EQ(fb.n_mels, 80u);
  ASSERT_EQ(fb.n_bins, 513u);
  for (std::size_t m = 0; m < fb.n_mels; ++m) {
    double sum = 0.0;
    for (std::size_t k = 0; k < fb.n_bins; ++k) {
      EXPECT_GE(fb.weight(m, k), 0.0);
      sum += fb.weight(m, k);
    }
    EXPECT_GT(sum, 0.0) << "filter " << m;
  }
}

TEST(MelFilterbank, CentersFollowMelFormula) {
  const MelFilterbank fb = MakeMelFilterbank(FrameSpec{}, kSr);
  for (std::size_t m = 0; m < fb.n_mels; ++m) {
    EXPECT_NEAR(fb.center_hz[m], OracleCenterHz(m, 80, kSr), 1e-9);
    if (m > 0) {
      EXPECT_GE(fb.center_hz[m], fb.center_hz[m - 1]);
    }
  }
  EXPECT_NEAR(HzToMel(1000.0), 2595.0 * std::log10(1.0 + 1000.0 / 700.0), 1e-12);
  EXPECT_NEAR(MelToHz(HzToMel(3210.5)), 3210.5, 1e-9);
}

TEST(MelFilterbank, PeakBinIsNearestToCenter) {
  const MelFilterbank fb = MakeMelFilterbank(FrameSpec{}, kSr);
  const double bin_hz = double(kSr) / 1024.0;
  for (std::size_t m = 0; m < fb.n_mels; ++m) {
    std::size_t peak = 0;
    for (std::size_t k = 1; k < fb.n_bins; ++k)
      if (fb.weight(m, k) > fb.weight(m, peak)) peak = k;
    const auto nearest = static_cast<std::size_t>(std::lround(OracleCenterHz(m, 80, kSr) / bin_hz));
    if (m == 0) {
      EXPECT_EQ(peak, nearest);
    } else {
      EXPECT_LE(std::abs(double(peak) - double(nearest)), 1.0) << "filter " << m;
    }
  }
}

TEST(MelFilterbank, AdjacentFiltersOverlapOrTouch) {
  const MelFilterbank fb = MakeMelFilterbank(FrameSpec{}, kSr);
  for (std::size_t m = 0; m + 1 < fb.n_mels; ++m) {
    EXPECT_LE(fb.first_bin[m + 1], fb.last_bin[m] + 1) << m;
    EXPECT_LE(fb.first_bin[m], fb.first_bin[m + 1]);
  }
  // Above the narrow low-frequency region the triangles share bins.
  for (std::size_t m = 20; m + 1 < fb.n_mels; ++m) EXPECT_LE(fb.first_bin[m + 1], fb.last_bin[m]);
}

TEST(LogMel, SilenceHitsTheFloor) {
  Waveform w;
  w.samples.assign(kSr, 0.0);
  const LogMelMatrix m = LogMel(w, FrameSpec{});
  ASSERT_EQ(m.n_frames, 77u);
  for (double v : m.values) EXPECT_EQ(v, std::log(1e-10));
}

TEST(LogMel, TwoSecondsGive157Frames) {
  Waveform w = Noise(32000, 1);
  EXPECT_EQ(LogMel(w, FrameSpec{}).n_frames, 157u);
  EXPECT_EQ(LogMel(w, FrameSpec{}).n_mels, 80u);
}

TEST(LogMel, ToneLightsUpItsFilter) {
  const MelFilterbank fb = MakeMelFilterbank(FrameSpec{}, kSr);
  for (std::size_t target : {20u, 35u, 50u, 65u, 78u}) {
    const LogMelMatrix m = LogMel(Sine(OracleCenterHz(target, 80, kSr), 1.0), FrameSpec{});
    for (std::size_t t = 0; t < m.n_frames; ++t) {
      auto row = m.row(t);
      const auto arg = std::max_element(row.begin(), row.end()) - row.begin();
      EXPECT_EQ(static_cast<std::size_t>(arg), target) << "frame " << t;
    }
    (void)fb;
  }
}

TEST(LogMel, MatchesDirectDftOracle) {
  const Waveform w = Noise(2000, 9, 0.3);
  const FrameSpec spec;
  const LogMelMatrix got = LogMel(w, spec);
  const MelFilterbank fb = MakeMelFilterbank(spec, kSr);
  for (std::size_t t = 0; t < got.n_frames; ++t) {
    std::vector<double> power(513, 0.0);
    for (std::size_t k = 0; k < 513; ++k) {
      std::complex<double> acc = 0.0;
      for (std::size_t i = 0; i < 800; ++i) {
        const double taper = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / 800.0);
        acc += w.samples[t * 200 + i] * taper *
               std::polar(1.0, -2.0 * std::numbers::pi * double(k * i % 1024) / 1024.0);
      }
      power[k] = std::norm(acc);
    }
    for (std::size_t m = 0; m < 80; ++m) {
      double e = 0.0;
      for (std::size_t k = 0; k < 513; ++k) e += fb.weight(m, k) * power[k];
      EXPECT_NEAR(got.at(t, m), std::log(std::max(e, 1e-10)), 1e-9) << t << "," << m;
    }
  }
}

TEST(LogMel, IgnoresTrailingPartialShift) {
  Waveform w = Noise(16000, 4);
  const LogMelMatrix a = LogMel(w, FrameSpec{});
  for (int extra : {1, 50, 199}) {
    Waveform v = w;
    Rng rng(extra);
    for (int i = 0; i < extra; ++i) v.samples.push_back(rng.Normal());
    const LogMelMatrix b = LogMel(v, FrameSpec{});
    EXPECT_EQ(a.n_frames, b.n_frames);
    EXPECT_EQ(a.values, b.values);
  }
}

TEST(LogMel, TooShortIsEmptyAudio) {
  Waveform w;
  w.samples.assign(799, 0.1);
  try {
    LogMel(w, FrameSpec{});
    FAIL();
  } catch (const KwsError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyAudio);
  }
}

TEST(LogMel, RateMismatchIsRejected) {
  Waveform w = Noise(4000, 1);
  w.sample_rate_hz = 8000;
  LogMelExtractor ex(FrameSpec{}, kSr);
  EXPECT_THROW(ex.Compute(w), KwsError);
}

TEST(Windows, CountsAndOrigins) {
  EXPECT_EQ(WindowCount(121, 1), 1u);
  EXPECT_EQ(WindowCount(200, 1), 80u);
  EXPECT_EQ(WindowCount(120, 1), 0u);
  EXPECT_EQ(WindowCount(300, 7), (300 - 121) / 7 + 1);

  LogMelMatrix m(200, 3);
  for (std::size_t i = 0; i < m.values.size(); ++i) m.values[i] = double(i);
  const auto w1 = ExtractWindows(m, 1);
  ASSERT_EQ(w1.size(), 80u);
  EXPECT_EQ(w1.front().origin_frame, 0u);
  const auto w5 = ExtractWindows(m, 5);
  for (std::size_t i = 0; i < w5.size(); ++i) {
    EXPECT_EQ(w5[i].origin_frame, 5 * i);
    if (i) {
      EXPECT_GT(w5[i].origin_frame, w5[i - 1].origin_frame);
    }
    ASSERT_EQ(w5[i].values.size(), 121u * 3);
    for (std::size_t k = 0; k < w5[i].values.size(); ++k)
      EXPECT_EQ(w5[i].values[k], m.values[w5[i].origin_frame * 3 + k]);
  }
  EXPECT_TRUE(ExtractWindows(LogMelMatrix(120, 3), 1).empty());
}

TEST(Windows, SliceRepeatsFinalFrame) {
  LogMelMatrix m(110, 2);
  for (std::size_t i = 0; i < m.values.size(); ++i) m.values[i] = double(i);
  const FeatureWindow w = SliceWindow(m, 0);
  EXPECT_EQ(w.n_frames, 121u);
  for (std::size_t t = 109; t < 121; ++t) EXPECT_EQ(w.row(t)[1], m.at(109, 1));
}

TEST(Cmvn, ConstantBecomesZero) {
  LogMelMatrix m(50, 4, 3.25);
  const LogMelMatrix c = Cmvn(m);
  for (double v : c.values) EXPECT_EQ(v, 0.0);
}

TEST(Cmvn, ZeroMeanUnitVarianceAndIdempotent) {
  const LogMelMatrix m = LogMel(Noise(24000, 8), FrameSpec{});
  const LogMelMatrix c = Cmvn(m);
  for (std::size_t k = 0; k < c.n_mels; ++k) {
    double mean = 0.0, sq = 0.0;
    for (std::size_t t = 0; t < c.n_frames; ++t) mean += c.at(t, k);
    mean /= c.n_frames;
    for (std::size_t t = 0; t < c.n_frames; ++t) sq += (c.at(t, k) - mean) * (c.at(t, k) - mean);
    EXPECT_NEAR(mean, 0.0, 1e-12);
    EXPECT_NEAR(sq / c.n_frames, 1.0, 1e-9);
  }
  const LogMelMatrix cc = Cmvn(c);
  for (std::size_t i = 0; i < c.values.size(); ++i) EXPECT_NEAR(cc.values[i], c.values[i], 1e-12);
}

TEST(FeatureCache, RoundTrip) {
  std::vector<CachedFeatures> recs(2);
  recs[0].utt_id = "u1";
  recs[0].features = LogMel(Noise(3000, 1), FrameSpec{});
  recs[1].utt_id = "u2";
  recs[1].features = LogMelMatrix(1, 80, -1.5);
  const auto path = std::filesystem::temp_directory_path() / "cwkws_feats_test.feats";
  WriteFeatureCache(path, recs);
  const auto back = ReadFeatureCache(path);
  ASSERT_EQ(back.size(), 2u);
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].utt_id, recs[i].utt_id);
    EXPECT_EQ(back[i].features.n_frames, recs[i].features.n_frames);
    EXPECT_EQ(back[i].features.values, recs[i].features.values);
  }
  std::filesystem::remove(path);
}

TEST(FeatureCache, ShortPayloadAndBadHeader) {
  std::stringstream full;
  WriteFeatureRecord(full, "x", LogMelMatrix(2, 3, 1.0));
  std::string bytes = full.str();
  std::stringstream cut(bytes.substr(0, bytes.size() - 5));
  CachedFeatures rec;
  try {
    ReadFeatureRecord(cut, rec);
    FAIL();
  } catch (const KwsError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTruncated);
  }
  std::stringstream bad("x two 3\n");
  try {
    ReadFeatureRecord(bad, rec);
    FAIL();
  } catch (const KwsError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
  }
  std::stringstream empty;
  EXPECT_FALSE(ReadFeatureRecord(empty, rec));
}

}  // namespace
}  // namespace cwkws
