// include/cwkws/eval/metrics.h

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

#ifndef CWKWS_EVAL_METRICS_H_
#define CWKWS_EVAL_METRICS_H_

#include <string>
#include <vector>

#include "cwkws/detector/detector.h"

namespace cwkws {

struct ScoredPositive {
  std::string utt_id;
  double confidence = 0.0;
};

struct ScoredNegative {
  std::string utt_id;
  PosteriorTrace trace;
  double duration_s = 0.0;
};

struct ScoredCorpus {
  std::vector<ScoredPositive> positives;
  std::vector<ScoredNegative> negatives;
  double negative_audio_hours = 0.0;

  /// Recomputes negative_audio_hours from the negative durations.
  void UpdateHours();
};

/// Union of two corpora (positives and negatives concatenated).
ScoredCorpus MergeCorpora(const ScoredCorpus& a, const ScoredCorpus& b);

/// Total triggers over the negatives per hour of negative audio. Throws
/// kZeroHours.
double FaPerHour(const ScoredCorpus& corpus, double threshold,
                 std::size_t lockout = kWindowFrames);

/// 100 * |{confidence <= threshold}| / |positives|. Throws kNoPositives.
double FrRate(const ScoredCorpus& corpus, double threshold);

struct DetPoint {
  double threshold = 0.0;
  double fa_per_hour = 0.0;
  double fr_percent = 0.0;
};

using DetCurve = std::vector<DetPoint>;

/// One point per threshold: every distinct positive confidence and negative
/// trace maximum, plus 0 and 1, in descending order. Throws kEmptyCorpus.
DetCurve ComputeDetCurve(const ScoredCorpus& corpus, std::size_t lockout = kWindowFrames);

struct OperatingPoint {
  double fr_percent = 100.0;
  double threshold = 1.0;
  double fa_per_hour = 0.0;
  bool reached = false;  // false: no point met the target, lowest-FA point returned
};

/// Lowest FR among points with FA/h <= target; ties go to the highest
/// threshold.
OperatingPoint FrAtFa(const DetCurve& curve, double target_fa_per_hour);

/// Header "threshold,fa_per_hour,fr_percent".
std::string DetCsv(const DetCurve& curve);

/// One JSON object per (model, test set, target).
std::string ReportLine(const std::string& model, const std::string& test_set,
                       double target_fa_per_hour, const OperatingPoint& op);

}  // namespace cwkws

#endif  // CWKWS_EVAL_METRICS_H_
