// include/cwkws/features/log_mel.h

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

#ifndef CWKWS_FEATURES_LOG_MEL_H_
#define CWKWS_FEATURES_LOG_MEL_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cwkws/audio/wav.h"
#include "cwkws/features/fft.h"

namespace cwkws {

/// Model input height: frames per segmental window.
inline constexpr std::size_t kWindowFrames = 121;

enum class TaperWindow { kHammingPeriodic, kHannPeriodic, kRectangular };

std::string TaperWindowName(TaperWindow w);
TaperWindow ParseTaperWindow(const std::string& name);

/// Framing and filterbank parameters. Defaults: 50 ms frames with a 12.5 ms
/// shift, 80 HTK-scale mel bands, periodic Hamming taper, 1024-point FFT,
/// log floor 1e-10.
struct FrameSpec {
  double frame_len_ms = 50.0;
  double shift_ms = 12.5;
  std::size_t n_mels = 80;
  std::size_t fft_size = 1024;
  TaperWindow window = TaperWindow::kHammingPeriodic;
  double log_floor = 1e-10;

  std::size_t FrameLengthSamples(int sample_rate_hz) const;
  std::size_t ShiftSamples(int sample_rate_hz) const;

  /// Throws kInvalidConfig when the invariants fail for `sample_rate_hz`.
  void Validate(int sample_rate_hz) const;
};

/// Frame-major log-mel features.
struct LogMelMatrix {
  std::size_t n_frames = 0;
  std::size_t n_mels = 0;
  std::vector<double> values;

  LogMelMatrix() = default;
  LogMelMatrix(std::size_t frames, std::size_t mels, double fill = 0.0)
      : n_frames(frames), n_mels(mels), values(frames * mels, fill) {}

  std::span<double> row(std::size_t t) {
    return {values.data() + t * n_mels, n_mels};
  }
  std::span<const double> row(std::size_t t) const {
    return {values.data() + t * n_mels, n_mels};
  }
  double& at(std::size_t t, std::size_t m) { return values[t * n_mels + m]; }
  double at(std::size_t t, std::size_t m) const { return values[t * n_mels + m]; }
};

/// A kWindowFrames x n_mels block copied out of a LogMelMatrix starting at
/// `origin_frame`.
struct FeatureWindow {
  std::size_t n_frames = kWindowFrames;
  std::size_t n_mels = 80;
  std::size_t origin_frame = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t t) const {
    return {values.data() + t * n_mels, n_mels};
  }
};

/// Triangular filters evaluated on the mel axis; row m covers FFT bins
/// [first_bin[m], last_bin[m]].
struct MelFilterbank {
  std::size_t n_mels = 0;
  std::size_t n_bins = 0;  // fft_size / 2 + 1
  std::vector<double> weights;     // n_mels x n_bins
  std::vector<double> center_hz;   // per filter
  std::vector<std::size_t> first_bin;
  std::vector<std::size_t> last_bin;

  double weight(std::size_t m, std::size_t k) const { return weights[m * n_bins + k]; }
};

/// HTK mel scale, 2595 * log10(1 + f / 700).
double HzToMel(double hz);
double MelToHz(double mel);

std::size_t FrameCount(std::size_t n_samples, int sample_rate_hz, const FrameSpec& spec);

MelFilterbank MakeMelFilterbank(const FrameSpec& spec, int sample_rate_hz);

std::vector<double> MakeTaperWindow(TaperWindow kind, std::size_t length);

/// Reusable extractor; holds the FFT tables, filterbank and taper for one
/// (FrameSpec, sample rate) pair. Const methods are safe to call concurrently.
class LogMelExtractor {
 public:
  LogMelExtractor(const FrameSpec& spec, int sample_rate_hz);

  /// Throws kEmptyAudio when the waveform holds less than one frame and
  /// kUnsupportedFormat when its rate differs from the extractor's.
  LogMelMatrix Compute(const Waveform& wave) const;

  const FrameSpec& spec() const { return spec_; }
  const MelFilterbank& filterbank() const { return filterbank_; }
  int sample_rate_hz() const { return sample_rate_hz_; }

 private:
  FrameSpec spec_;
  int sample_rate_hz_;
  std::size_t frame_len_;
  std::size_t shift_;
  Fft fft_;
  MelFilterbank filterbank_;
  std::vector<double> taper_;
};

LogMelMatrix LogMel(const Waveform& wave, const FrameSpec& spec);

/// Windows at origins 0, stride, 2*stride, ... while origin + kWindowFrames
/// <= n_frames.
std::vector<FeatureWindow> ExtractWindows(const LogMelMatrix& m, std::size_t stride);

/// Number of windows ExtractWindows would return.
std::size_t WindowCount(std::size_t n_frames, std::size_t stride);

/// Copies rows [origin, origin + kWindowFrames); rows past the end repeat the
/// final frame.
FeatureWindow SliceWindow(const LogMelMatrix& m, std::size_t origin);

/// Per-coefficient mean 0 / variance 1 over the utterance. Coefficients with
/// (near) zero variance map to 0.
LogMelMatrix Cmvn(const LogMelMatrix& m);

}  // namespace cwkws

#endif  // CWKWS_FEATURES_LOG_MEL_H_
