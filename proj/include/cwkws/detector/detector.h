// include/cwkws/detector/detector.h

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

#ifndef CWKWS_DETECTOR_DETECTOR_H_
#define CWKWS_DETECTOR_DETECTOR_H_

#include <cstddef>
#include <string>
#include <vector>

#include "cwkws/features/log_mel.h"
#include "cwkws/models/domain_classifier.h"
#include "cwkws/models/kws_cnn.h"

namespace cwkws {

/// Keyword posterior for each window origin 0, stride, 2*stride, ...
struct PosteriorTrace {
  std::vector<double> values;
  std::size_t stride = 1;
  std::size_t n_source_frames = 0;

  std::size_t origin(std::size_t i) const { return i * stride; }
};

struct DetectionConfig {
  double threshold = 0.5;
  std::size_t stride = 1;
  std::size_t lockout = kWindowFrames;

  void Validate() const;
};

/// Posterior of one window. EmbKwsCnn models need `domain`; the embedding
/// is taken from the same window.
double WindowPosterior(const KwsModel& model, const DomainClassifier* domain,
                       const FeatureWindow& x);

/// One posterior per full window, in origin order. Utterances shorter than
/// one window give an empty trace. Throws kMissingSource when an embedding
/// model arrives without a classifier.
PosteriorTrace ScoreStream(const LogMelMatrix& m, const KwsModel& model,
                           const DomainClassifier* domain, std::size_t stride = 1);

/// max over the trace. Throws kEmptyTrace.
double Confidence(const PosteriorTrace& trace);

/// Origins (in frames) where the posterior strictly exceeds the threshold
/// and at least `lockout` frames have passed since the previous trigger.
std::vector<std::size_t> Detect(const PosteriorTrace& trace, const DetectionConfig& cfg);

struct Trigger {
  std::string utt_id;
  std::size_t origin_frame = 0;
  double posterior = 0.0;
};

/// Header "utt_id,origin_frame,time_s,posterior"; time_s = origin * shift.
std::string TriggerCsv(const std::vector<Trigger>& triggers, double shift_ms = 12.5);

}  // namespace cwkws

#endif  // CWKWS_DETECTOR_DETECTOR_H_
