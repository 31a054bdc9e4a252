// src/pipeline/dataset.cc

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

#include "cwkws/pipeline/dataset.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "cwkws/common/error.h"

namespace cwkws {

std::string_view SetupName(TrainSetup s) {
  switch (s) {
    case TrainSetup::kBaseline: return "baseline";
    case TrainSetup::kRealConcat: return "real+concat";
    case TrainSetup::kRealSyn: return "real+syn";
    case TrainSetup::kRealMask: return "real+mask";
    case TrainSetup::kRealAll: return "real+all";
    case TrainSetup::kRealAllEmb: return "real+all+emb";
  }
  return "?";
}

TrainSetup ParseSetup(std::string_view name) {
  for (TrainSetup s : kAllSetups)
    if (SetupName(s) == name) return s;
  Fail(ErrorCode::kInvalidConfig,
       "unknown setup '" + std::string(name) +
           "' (expected baseline, real+concat, real+syn, real+mask, real+all, real+all+emb)");
}

bool SetupUsesConcat(TrainSetup s) {
  return s == TrainSetup::kRealConcat || s == TrainSetup::kRealAll ||
         s == TrainSetup::kRealAllEmb;
}

bool SetupUsesSynthetic(TrainSetup s) {
  return s == TrainSetup::kRealSyn || s == TrainSetup::kRealAll || s == TrainSetup::kRealAllEmb;
}

bool SetupUsesMask(TrainSetup s) {
  return s == TrainSetup::kRealMask || s == TrainSetup::kRealAll ||
         s == TrainSetup::kRealAllEmb;
}

bool SetupUsesEmbedding(TrainSetup s) { return s == TrainSetup::kRealAllEmb; }

std::string_view SourceName(SampleSource s) {
  switch (s) {
    case SampleSource::kRealPositive: return "real_pos";
    case SampleSource::kRealNegative: return "real_neg";
    case SampleSource::kConcatWake: return "concat_wake";
    case SampleSource::kConcatCw: return "concat_cw";
    case SampleSource::kSyntheticPositive: return "syn_pos";
    case SampleSource::kSyntheticNegative: return "syn_neg";
    case SampleSource::kMasked: return "masked";
  }
  return "?";
}

Label SourceLabel(SampleSource s) {
  switch (s) {
    case SampleSource::kRealPositive:
    case SampleSource::kConcatWake:
    case SampleSource::kSyntheticPositive:
      return Label::kPositive;
    default:
      return Label::kNegative;
  }
}

Domain SourceDomain(SampleSource s) {
  switch (s) {
    case SampleSource::kConcatWake:
    case SampleSource::kConcatCw:
      return Domain::kConcat;
    case SampleSource::kSyntheticPositive:
    case SampleSource::kSyntheticNegative:
      return Domain::kSynthetic;
    default:
      return Domain::kReal;
  }
}

std::size_t SourceTally::total() const {
  std::size_t n = 0;
  for (auto c : counts) n += c;
  return n;
}

std::size_t SourceTally::positives() const {
  std::size_t n = 0;
  for (std::size_t k = 0; k < kSourceCount; ++k)
    if (SourceLabel(static_cast<SampleSource>(k)) == Label::kPositive) n += counts[k];
  return n;
}

std::size_t SourceTally::negatives() const { return total() - positives(); }

std::string SourceTally::ToString() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < kSourceCount; ++k) {
    if (k) os << ' ';
    os << SourceName(static_cast<SampleSource>(k)) << '=' << counts[k];
  }
  return os.str();
}

EpochPlan ComposeEpoch(TrainSetup setup, const SourceCounts& counts, std::uint64_t seed,
                       int epoch) {
  if (counts.real_positive == 0 || counts.real_negative == 0)
    Fail(ErrorCode::kMissingSource, "training needs real positive and negative utterances");
  if (SetupUsesConcat(setup) && !counts.has_inventory)
    Fail(ErrorCode::kMissingSource,
         "setup " + std::string(SetupName(setup)) + " needs a subword alignment inventory");
  if (SetupUsesSynthetic(setup) && counts.synthetic_positive + counts.synthetic_negative == 0)
    Fail(ErrorCode::kMissingSource,
         "setup " + std::string(SetupName(setup)) + " needs a synthetic manifest");

  EpochPlan plan;
  auto add = [&](SampleSource s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) plan.items.push_back({s, i});
    plan.tally[s] += n;
  };
  add(SampleSource::kRealPositive, counts.real_positive);
  add(SampleSource::kRealNegative, counts.real_negative);
  if (SetupUsesConcat(setup)) {
    add(SampleSource::kConcatWake, counts.real_positive);
    add(SampleSource::kConcatCw, counts.real_positive);
  }
  if (SetupUsesSynthetic(setup)) {
    add(SampleSource::kSyntheticPositive, counts.synthetic_positive);
    add(SampleSource::kSyntheticNegative, counts.synthetic_negative);
  }
  if (SetupUsesMask(setup)) add(SampleSource::kMasked, counts.real_positive);

  Rng rng = Rng::Derive(seed, {0x5348ULL, static_cast<std::uint64_t>(epoch)});
  rng.Shuffle(plan.items.begin(), plan.items.end());
  return plan;
}

std::size_t StartFrame(double start_ms, const FrameSpec& spec) {
  if (!(start_ms >= 0.0)) Fail(ErrorCode::kBadInterval, "negative keyword start time");
  // The small slack keeps exact multiples (e.g. 125 ms) from rounding down.
  return static_cast<std::size_t>(std::floor(start_ms / spec.shift_ms + 1e-9));
}

FeatureWindow CropWindow(const LogMelMatrix& m, std::size_t origin) {
  const std::size_t end = origin + kWindowFrames;
  if (m.n_frames == 0 || end > m.n_frames + kMaxCropPadFrames || origin >= m.n_frames)
    Fail(ErrorCode::kTooShort, "window at frame " + std::to_string(origin) + " needs " +
                                   std::to_string(end) + " frames, utterance has " +
                                   std::to_string(m.n_frames));
  return SliceWindow(m, origin);
}

FeatureWindow CropKeywordWindow(const LogMelMatrix& m, double start_ms, const FrameSpec& spec) {
  return CropWindow(m, StartFrame(start_ms, spec));
}

namespace {

std::map<std::string, double> AnchorTimes(const std::vector<SubwordSegment>* alignments,
                                          const std::string& first_subword) {
  std::map<std::string, double> out;
  if (!alignments) return out;
  for (const auto& row : *alignments) {
    if (row.subword != first_subword) continue;
    auto it = out.find(row.utt_id);
    if (it == out.end() || row.start_ms < it->second) out[row.utt_id] = row.start_ms;
  }
  return out;
}

void CheckCroppable(const PreparedUtterance& u) {
  const std::size_t origin = u.anchor_frame.value_or(0);
  if (origin >= u.features.n_frames ||
      origin + kWindowFrames > u.features.n_frames + kMaxCropPadFrames)
    Fail(ErrorCode::kTooShort, "utterance " + u.utt_id + " has " +
                                   std::to_string(u.features.n_frames) +
                                   " frames, too few for a window at frame " +
                                   std::to_string(origin));
}

}  // namespace

TrainingData::TrainingData(const DatasetOptions& options, const DataSources& sources)
    : options_(options),
      extractor_(options.feature_spec, options.sample_rate_hz),
      inventory_(sources.inventory) {
  if (options_.keyword.size() < 2)
    Fail(ErrorCode::kInvalidConfig, "keyword needs at least two subwords");
  options_.mask.Validate();
  if (options_.negative_stride == 0)
    Fail(ErrorCode::kInvalidConfig, "negative_stride must be >= 1");
  keyword_recipe_ = KeywordRecipe(options_.keyword);
  recipes_ = ConfusionRecipes(options_.keyword);
  if (inventory_) {
    for (const auto& s : options_.keyword)
      if (!inventory_->Contains(s))
        Fail(ErrorCode::kUnknownSubword, "inventory has no segments for keyword subword '" + s + "'");
  }

  const auto anchors = AnchorTimes(sources.alignments, options_.keyword.front());
  auto load = [&](const Manifest& man, std::vector<PreparedUtterance>& pos,
                  std::vector<PreparedUtterance>& neg) {
    for (const auto& e : man.entries) {
      PreparedUtterance u;
      u.utt_id = e.utt_id;
      u.label = e.label;
      u.domain = e.domain;
      u.wave = std::make_shared<const Waveform>(ReadWav(man.Resolve(e)));
      u.features = Featurize(*u.wave);
      std::optional<double> start = e.keyword_start_ms;
      if (!start) {
        auto it = anchors.find(e.utt_id);
        if (it != anchors.end()) start = it->second;
      }
      if (start) u.anchor_frame = StartFrame(*start, options_.feature_spec);
      if (e.label == Label::kPositive && !u.anchor_frame)
        Fail(ErrorCode::kMissingSource, "positive " + e.utt_id +
                                            " has neither keyword_start_ms nor an alignment row for '" +
                                            options_.keyword.front() + "'");
      CheckCroppable(u);
      (e.label == Label::kPositive ? pos : neg).push_back(std::move(u));
    }
  };
  if (sources.real) load(*sources.real, real_pos_, real_neg_);
  if (sources.synthetic) load(*sources.synthetic, syn_pos_, syn_neg_);
}

SourceCounts TrainingData::counts() const {
  return {real_pos_.size(), real_neg_.size(), syn_pos_.size(), syn_neg_.size(),
          inventory_ != nullptr};
}

LogMelMatrix TrainingData::Featurize(const Waveform& w) const {
  return Cmvn(extractor_.Compute(w));
}

Waveform TrainingData::ConcatWave(const ConcatRecipe& recipe, Rng& rng) const {
  if (!inventory_) Fail(ErrorCode::kMissingSource, "no subword inventory for concatenation");
  Waveform w = ConcatSample(recipe, *inventory_, rng);
  const auto target = static_cast<std::size_t>(
      std::ceil(options_.concat_min_seconds * w.sample_rate_hz));
  if (w.samples.size() < target) {
    auto pad = GaussianSegment(target - w.samples.size(), options_.concat_pad_sigma, rng);
    w.samples.insert(w.samples.end(), pad.begin(), pad.end());
  }
  return w;
}

FeatureWindow TrainingData::AnchoredOrRandom(const PreparedUtterance& u, Rng& rng) const {
  if (u.anchor_frame) return CropWindow(u.features, *u.anchor_frame);
  const std::size_t stride = options_.negative_stride;
  const std::size_t n = WindowCount(u.features.n_frames, stride);
  if (n == 0) return CropWindow(u.features, 0);
  return CropWindow(u.features, rng.UniformIndex(n) * stride);
}

TrainSample TrainingData::Materialize(const PlanItem& item, Rng& rng) const {
  TrainSample s;
  s.source = item.source;
  s.label = SourceLabel(item.source);
  s.domain = SourceDomain(item.source);
  switch (item.source) {
    case SampleSource::kRealPositive:
      s.x = AnchoredOrRandom(real_pos_.at(item.index), rng);
      break;
    case SampleSource::kRealNegative:
      s.x = AnchoredOrRandom(real_neg_.at(item.index), rng);
      break;
    case SampleSource::kSyntheticPositive:
      s.x = AnchoredOrRandom(syn_pos_.at(item.index), rng);
      break;
    case SampleSource::kSyntheticNegative:
      s.x = AnchoredOrRandom(syn_neg_.at(item.index), rng);
      break;
    case SampleSource::kConcatWake:
    case SampleSource::kConcatCw: {
      const ConcatRecipe& recipe = item.source == SampleSource::kConcatWake
                                       ? keyword_recipe_
                                       : recipes_[rng.UniformIndex(recipes_.size())];
      s.x = CropWindow(Featurize(ConcatWave(recipe, rng)), 0);
      break;
    }
    case SampleSource::kMasked: {
      const PreparedUtterance& u = real_pos_.at(item.index);
      Waveform masked = MaskSample(*u.wave, options_.mask, rng);
      s.x = CropWindow(Featurize(masked), u.anchor_frame.value_or(0));
      break;
    }
  }
  return s;
}

}  // namespace cwkws
