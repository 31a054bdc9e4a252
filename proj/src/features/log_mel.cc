// src/features/log_mel.cc

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

#include "cwkws/features/log_mel.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cwkws/common/error.h"

namespace cwkws {

std::string TaperWindowName(TaperWindow w) {
  switch (w) {
    case TaperWindow::kHammingPeriodic: return "hamming";
    case TaperWindow::kHannPeriodic: return "hann";
    case TaperWindow::kRectangular: return "rectangular";
  }
  return "hamming";
}

TaperWindow ParseTaperWindow(const std::string& name) {
  if (name == "hamming") return TaperWindow::kHammingPeriodic;
  if (name == "hann") return TaperWindow::kHannPeriodic;
  if (name == "rectangular") return TaperWindow::kRectangular;
  Fail(ErrorCode::kInvalidConfig, "unknown window '" + name + "'");
}

std::size_t FrameSpec::FrameLengthSamples(int sample_rate_hz) const {
  return static_cast<std::size_t>(std::llround(frame_len_ms * sample_rate_hz / 1000.0));
}

std::size_t FrameSpec::ShiftSamples(int sample_rate_hz) const {
  return static_cast<std::size_t>(std::llround(shift_ms * sample_rate_hz / 1000.0));
}

void FrameSpec::Validate(int sample_rate_hz) const {
  if (sample_rate_hz <= 0) Fail(ErrorCode::kInvalidConfig, "sample rate must be positive");
  if (!(shift_ms > 0.0) || !(frame_len_ms > shift_ms))
    Fail(ErrorCode::kInvalidConfig, "need frame_len_ms > shift_ms > 0");
  if (n_mels < 1) Fail(ErrorCode::kInvalidConfig, "n_mels must be >= 1");
  if (!IsPowerOfTwo(fft_size) || fft_size < FrameLengthSamples(sample_rate_hz))
    Fail(ErrorCode::kInvalidConfig,
         "fft_size must be a power of two >= the frame length in samples");
  if (ShiftSamples(sample_rate_hz) == 0)
    Fail(ErrorCode::kInvalidConfig, "frame shift rounds to 0 samples");
  if (!(log_floor > 0.0)) Fail(ErrorCode::kInvalidConfig, "log_floor must be positive");
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::size_t FrameCount(std::size_t n_samples, int sample_rate_hz, const FrameSpec& spec) {
  const std::size_t frame_len = spec.FrameLengthSamples(sample_rate_hz);
  const std::size_t shift = spec.ShiftSamples(sample_rate_hz);
  if (n_samples < frame_len || shift == 0) return 0;
  return (n_samples - frame_len) / shift + 1;
}

MelFilterbank MakeMelFilterbank(const FrameSpec& spec, int sample_rate_hz) {
  MelFilterbank fb;
  fb.n_mels = spec.n_mels;
  fb.n_bins = spec.fft_size / 2 + 1;
  fb.weights.assign(fb.n_mels * fb.n_bins, 0.0);
  fb.center_hz.resize(fb.n_mels);
  fb.first_bin.assign(fb.n_mels, 0);
  fb.last_bin.assign(fb.n_mels, 0);

  const double mel_max = HzToMel(sample_rate_hz / 2.0);
  const double mel_step = mel_max / static_cast<double>(fb.n_mels + 1);
  const double bin_hz = static_cast<double>(sample_rate_hz) / spec.fft_size;

  for (std::size_t m = 0; m < fb.n_mels; ++m) {
    const double left = mel_step * static_cast<double>(m);
    const double center = left + mel_step;
    const double right = center + mel_step;
    fb.center_hz[m] = MelToHz(center);
    bool any = false;
    for (std::size_t k = 0; k < fb.n_bins; ++k) {
      const double mel = HzToMel(bin_hz * static_cast<double>(k));
      double w = 0.0;
      if (mel > left && mel <= center) {
        w = (mel - left) / (center - left);
      } else if (mel > center && mel < right) {
        w = (right - mel) / (right - center);
      }
      if (w > 0.0) {
        if (!any) fb.first_bin[m] = k;
        fb.last_bin[m] = k;
        any = true;
      }
      fb.weights[m * fb.n_bins + k] = w;
    }
    if (!any) {
      // Narrower than one bin: fall back to the nearest bin.
      auto k = static_cast<std::size_t>(std::lround(fb.center_hz[m] / bin_hz));
      k = std::min(k, fb.n_bins - 1);
      fb.weights[m * fb.n_bins + k] = 1.0;
      fb.first_bin[m] = fb.last_bin[m] = k;
    }
  }
  return fb;
}

std::vector<double> MakeTaperWindow(TaperWindow kind, std::size_t length) {
  std::vector<double> w(length, 1.0);
  const double n = static_cast<double>(length);
  for (std::size_t i = 0; i < length; ++i) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(i) / n;
    switch (kind) {
      case TaperWindow::kHammingPeriodic: w[i] = 0.54 - 0.46 * std::cos(phase); break;
      case TaperWindow::kHannPeriodic: w[i] = 0.5 - 0.5 * std::cos(phase); break;
      case TaperWindow::kRectangular: break;
    }
  }
  return w;
}

LogMelExtractor::LogMelExtractor(const FrameSpec& spec, int sample_rate_hz)
    : spec_(spec),
      sample_rate_hz_(sample_rate_hz),
      frame_len_((spec.Validate(sample_rate_hz), spec.FrameLengthSamples(sample_rate_hz))),
      shift_(spec.ShiftSamples(sample_rate_hz)),
      fft_(spec.fft_size),
      filterbank_(MakeMelFilterbank(spec, sample_rate_hz)),
      taper_(MakeTaperWindow(spec.window, frame_len_)) {}

LogMelMatrix LogMelExtractor::Compute(const Waveform& wave) const {
  if (wave.sample_rate_hz != sample_rate_hz_)
    Fail(ErrorCode::kUnsupportedFormat,
         "waveform rate " + std::to_string(wave.sample_rate_hz) +
             " Hz does not match feature rate " + std::to_string(sample_rate_hz_));
  const std::size_t n_frames = FrameCount(wave.size(), sample_rate_hz_, spec_);
  if (n_frames == 0)
    Fail(ErrorCode::kEmptyAudio, "waveform shorter than one analysis frame");

  LogMelMatrix out(n_frames, spec_.n_mels);
  std::vector<double> frame(frame_len_);
  std::vector<double> power(filterbank_.n_bins);
  const double log_floor = spec_.log_floor;
  for (std::size_t t = 0; t < n_frames; ++t) {
    const double* src = wave.samples.data() + t * shift_;
    for (std::size_t i = 0; i < frame_len_; ++i) frame[i] = src[i] * taper_[i];
    fft_.PowerSpectrum(frame, power);
    auto row = out.row(t);
    for (std::size_t m = 0; m < spec_.n_mels; ++m) {
      double energy = 0.0;
      const double* w = filterbank_.weights.data() + m * filterbank_.n_bins;
      for (std::size_t k = filterbank_.first_bin[m]; k <= filterbank_.last_bin[m]; ++k)
        energy += w[k] * power[k];
      row[m] = std::log(std::max(energy, log_floor));
    }
  }
  return out;
}

LogMelMatrix LogMel(const Waveform& wave, const FrameSpec& spec) {
  return LogMelExtractor(spec, wave.sample_rate_hz).Compute(wave);
}

std::size_t WindowCount(std::size_t n_frames, std::size_t stride) {
  if (n_frames < kWindowFrames || stride == 0) return 0;
  return (n_frames - kWindowFrames) / stride + 1;
}

FeatureWindow SliceWindow(const LogMelMatrix& m, std::size_t origin) {
  if (m.n_frames == 0) Fail(ErrorCode::kEmptyFeatures, "no frames to slice");
  FeatureWindow w;
  w.n_mels = m.n_mels;
  w.origin_frame = origin;
  w.values.resize(kWindowFrames * m.n_mels);
  for (std::size_t t = 0; t < kWindowFrames; ++t) {
    const std::size_t src = std::min(origin + t, m.n_frames - 1);
    std::copy_n(m.values.data() + src * m.n_mels, m.n_mels,
                w.values.data() + t * m.n_mels);
  }
  return w;
}

std::vector<FeatureWindow> ExtractWindows(const LogMelMatrix& m, std::size_t stride) {
  if (stride == 0) Fail(ErrorCode::kInvalidConfig, "window stride must be >= 1");
  const std::size_t count = WindowCount(m.n_frames, stride);
  std::vector<FeatureWindow> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(SliceWindow(m, i * stride));
  return out;
}

LogMelMatrix Cmvn(const LogMelMatrix& m) {
  if (m.n_frames == 0) Fail(ErrorCode::kEmptyFeatures, "CMVN needs at least one frame");
  LogMelMatrix out(m.n_frames, m.n_mels);
  const double n = static_cast<double>(m.n_frames);
  for (std::size_t c = 0; c < m.n_mels; ++c) {
    double mean = 0.0;
    for (std::size_t t = 0; t < m.n_frames; ++t) mean += m.at(t, c);
    mean /= n;
    double var = 0.0;
    for (std::size_t t = 0; t < m.n_frames; ++t) {
      const double d = m.at(t, c) - mean;
      var += d * d;
    }
    const double stddev = std::sqrt(var / n);
    if (stddev <= 1e-10 * std::max(1.0, std::abs(mean))) continue;  // stays 0
    for (std::size_t t = 0; t < m.n_frames; ++t)
      out.at(t, c) = (m.at(t, c) - mean) / stddev;
  }
  return out;
}

}  // namespace cwkws
