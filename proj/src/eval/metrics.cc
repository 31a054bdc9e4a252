// src/eval/metrics.cc

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

#include "cwkws/eval/metrics.h"

#include <algorithm>
#include <cstdio>
#include <functional>

#include "cwkws/common/error.h"
#include "json.hpp"

namespace cwkws {

void ScoredCorpus::UpdateHours() {
  double s = 0.0;
  for (const auto& n : negatives) s += n.duration_s;
  negative_audio_hours = s / 3600.0;
}

ScoredCorpus MergeCorpora(const ScoredCorpus& a, const ScoredCorpus& b) {
  ScoredCorpus out = a;
  out.positives.insert(out.positives.end(), b.positives.begin(), b.positives.end());
  out.negatives.insert(out.negatives.end(), b.negatives.begin(), b.negatives.end());
  out.UpdateHours();
  return out;
}

double FaPerHour(const ScoredCorpus& corpus, double threshold, std::size_t lockout) {
  if (!(corpus.negative_audio_hours > 0.0))
    Fail(ErrorCode::kZeroHours, "false alarms per hour need negative audio");
  DetectionConfig cfg;
  cfg.threshold = threshold;
  cfg.lockout = lockout;
  std::size_t triggers = 0;
  for (const auto& n : corpus.negatives) triggers += Detect(n.trace, cfg).size();
  return static_cast<double>(triggers) / corpus.negative_audio_hours;
}

double FrRate(const ScoredCorpus& corpus, double threshold) {
  if (corpus.positives.empty()) Fail(ErrorCode::kNoPositives, "false reject rate needs positives");
  std::size_t misses = 0;
  for (const auto& p : corpus.positives) misses += p.confidence <= threshold;
  return 100.0 * static_cast<double>(misses) / static_cast<double>(corpus.positives.size());
}

DetCurve ComputeDetCurve(const ScoredCorpus& corpus, std::size_t lockout) {
  if (corpus.positives.empty() || corpus.negatives.empty())
    Fail(ErrorCode::kEmptyCorpus, "DET curve needs positives and negatives");
  std::vector<double> thresholds = {0.0, 1.0};
  for (const auto& p : corpus.positives) thresholds.push_back(p.confidence);
  for (const auto& n : corpus.negatives)
    if (!n.trace.values.empty()) thresholds.push_back(Confidence(n.trace));
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  DetCurve curve;
  curve.reserve(thresholds.size());
  for (double t : thresholds) curve.push_back({t, FaPerHour(corpus, t, lockout), FrRate(corpus, t)});
  return curve;
}

OperatingPoint FrAtFa(const DetCurve& curve, double target) {
  OperatingPoint best;
  const DetPoint* pick = nullptr;
  for (const auto& p : curve) {
    if (p.fa_per_hour > target) continue;
    if (!pick || p.fr_percent < pick->fr_percent ||
        (p.fr_percent == pick->fr_percent && p.threshold > pick->threshold))
      pick = &p;
  }
  if (pick) return {pick->fr_percent, pick->threshold, pick->fa_per_hour, true};
  for (const auto& p : curve) {
    if (!pick || p.fa_per_hour < pick->fa_per_hour ||
        (p.fa_per_hour == pick->fa_per_hour && p.threshold > pick->threshold))
      pick = &p;
  }
  if (pick) return {pick->fr_percent, pick->threshold, pick->fa_per_hour, false};
  return best;
}

std::string DetCsv(const DetCurve& curve) {
  std::string out = "threshold,fa_per_hour,fr_percent\n";
  char buf[96];
  for (const auto& p : curve) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.threshold, p.fa_per_hour,
                  p.fr_percent);
    out += buf;
  }
  return out;
}

std::string ReportLine(const std::string& model, const std::string& test_set, double target,
                       const OperatingPoint& op) {
  nlohmann::json j = {{"model", model},
                      {"test_set", test_set},
                      {"target_fa_per_hour", target},
                      {"fr_percent", op.fr_percent},
                      {"threshold", op.threshold},
                      {"fa_per_hour", op.fa_per_hour},
                      {"target_reached", op.reached}};
  return j.dump();
}

}  // namespace cwkws
