// src/detector/detector.cc

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

#include "cwkws/detector/detector.h"

#include <algorithm>
#include <cstdio>

#include "cwkws/common/error.h"

namespace cwkws {

void DetectionConfig::Validate() const {
  if (!(threshold >= 0.0 && threshold <= 1.0))
    Fail(ErrorCode::kInvalidConfig, "threshold must lie in [0, 1]");
  if (stride < 1) Fail(ErrorCode::kInvalidConfig, "stride must be >= 1");
  if (lockout < 1) Fail(ErrorCode::kInvalidConfig, "lockout must be >= 1");
}

double WindowPosterior(const KwsModel& model, const DomainClassifier* domain,
                       const FeatureWindow& x) {
  if (const auto* m = std::get_if<KwsCnn>(&model)) return m->Forward(x).keyword;
  if (!domain)
    Fail(ErrorCode::kMissingSource, "embedding model needs a domain classifier to score");
  return std::get<EmbKwsCnn>(model).Forward(x, domain->Embed(x)).keyword;
}

PosteriorTrace ScoreStream(const LogMelMatrix& m, const KwsModel& model,
                           const DomainClassifier* domain, std::size_t stride) {
  if (stride < 1) Fail(ErrorCode::kInvalidConfig, "stride must be >= 1");
  if (std::holds_alternative<EmbKwsCnn>(model) && !domain)
    Fail(ErrorCode::kMissingSource, "embedding model needs a domain classifier to score");
  PosteriorTrace trace;
  trace.stride = stride;
  trace.n_source_frames = m.n_frames;
  const std::size_t n = WindowCount(m.n_frames, stride);
  trace.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    trace.values.push_back(WindowPosterior(model, domain, SliceWindow(m, i * stride)));
  return trace;
}

double Confidence(const PosteriorTrace& trace) {
  if (trace.values.empty()) Fail(ErrorCode::kEmptyTrace, "confidence of an empty trace");
  return *std::max_element(trace.values.begin(), trace.values.end());
}

std::vector<std::size_t> Detect(const PosteriorTrace& trace, const DetectionConfig& cfg) {
  std::vector<std::size_t> out;
  bool fired = false;
  std::size_t last = 0;
  for (std::size_t i = 0; i < trace.values.size(); ++i) {
    const std::size_t t = trace.origin(i);
    if (trace.values[i] > cfg.threshold && (!fired || t >= last + cfg.lockout)) {
      out.push_back(t);
      last = t;
      fired = true;
    }
  }
  return out;
}

std::string TriggerCsv(const std::vector<Trigger>& triggers, double shift_ms) {
  std::string out = "utt_id,origin_frame,time_s,posterior\n";
  char buf[128];
  for (const auto& t : triggers) {
    std::snprintf(buf, sizeof buf, ",%zu,%.4f,%.9g\n", t.origin_frame,
                  static_cast<double>(t.origin_frame) * shift_ms / 1000.0, t.posterior);
    out += t.utt_id;
    out += buf;
  }
  return out;
}

}  // namespace cwkws
