// include/cwkws/audio/wav.h

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

#ifndef CWKWS_AUDIO_WAV_H_
#define CWKWS_AUDIO_WAV_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cwkws/common/rng.h"

namespace cwkws {

/// Mono PCM audio as normalized samples. After DecodeWav every sample lies in
/// [-1, 1); out-of-range values are clipped by EncodeWav.
struct Waveform {
  std::vector<double> samples;
  int sample_rate_hz = 16000;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

/// Parses a RIFF/WAVE container holding 16-bit mono PCM. Chunks other than
/// "fmt " and "data" are skipped. Throws KwsError with kNotWav,
/// kUnsupportedFormat or kTruncated.
Waveform DecodeWav(std::span<const std::uint8_t> bytes);

/// Canonical 44-byte-header PCM16 mono file. Samples are quantized as
/// round(s * 32768) clamped to [-32768, 32767]; NaN encodes as 0.
std::vector<std::uint8_t> EncodeWav(const Waveform& wave);

Waveform ReadWav(const std::filesystem::path& path);
void WriteWav(const std::filesystem::path& path, const Waveform& wave);

/// Quantizes one sample exactly as EncodeWav does.
std::int16_t QuantizePcm16(double sample);

/// n independent N(0, sigma^2) draws from `rng`, each clamped to [-1, 1].
std::vector<double> GaussianSegment(std::size_t n, double sigma, Rng& rng);

/// Root mean square of the samples; 0 for an empty span.
double Rms(std::span<const double> samples);

}  // namespace cwkws

#endif  // CWKWS_AUDIO_WAV_H_
