// include/cwkws/pipeline/dataset.h

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

#ifndef CWKWS_PIPELINE_DATASET_H_
#define CWKWS_PIPELINE_DATASET_H_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cwkws/audio/wav.h"
#include "cwkws/augment/adversarial.h"
#include "cwkws/augment/inventory.h"
#include "cwkws/common/labels.h"
#include "cwkws/common/rng.h"
#include "cwkws/features/log_mel.h"
#include "cwkws/pipeline/manifest.h"

namespace cwkws {

// Training setups. Each adds sources on top of the real positive/negative
// sets:
//   baseline      real only
//   real+concat   + online concatenated keywords and confusion words
//   real+syn      + externally synthesized wake/confusion/negative audio
//   real+mask     + one online-masked negative per real positive
//   real+all      all of the above
//   real+all+emb  real+all with a frozen domain embedding fed to the head
enum class TrainSetup { kBaseline, kRealConcat, kRealSyn, kRealMask, kRealAll, kRealAllEmb };

inline constexpr std::array<TrainSetup, 6> kAllSetups = {
    TrainSetup::kBaseline, TrainSetup::kRealConcat, TrainSetup::kRealSyn,
    TrainSetup::kRealMask, TrainSetup::kRealAll,    TrainSetup::kRealAllEmb};

std::string_view SetupName(TrainSetup s);
/// Throws kInvalidConfig for unknown names.
TrainSetup ParseSetup(std::string_view name);
bool SetupUsesConcat(TrainSetup s);
bool SetupUsesSynthetic(TrainSetup s);
bool SetupUsesMask(TrainSetup s);
bool SetupUsesEmbedding(TrainSetup s);

enum class SampleSource {
  kRealPositive,
  kRealNegative,
  kConcatWake,
  kConcatCw,
  kSyntheticPositive,
  kSyntheticNegative,
  kMasked,
};
inline constexpr std::size_t kSourceCount = 7;

std::string_view SourceName(SampleSource s);
Label SourceLabel(SampleSource s);
/// Masked samples keep the domain of the real positive they came from.
Domain SourceDomain(SampleSource s);

/// Sizes of the fixed (non-generated) sources.
struct SourceCounts {
  std::size_t real_positive = 0;
  std::size_t real_negative = 0;
  std::size_t synthetic_positive = 0;
  std::size_t synthetic_negative = 0;
  bool has_inventory = false;
};

struct SourceTally {
  std::array<std::size_t, kSourceCount> counts{};

  std::size_t& operator[](SampleSource s) { return counts[static_cast<std::size_t>(s)]; }
  std::size_t operator[](SampleSource s) const { return counts[static_cast<std::size_t>(s)]; }
  std::size_t total() const;
  std::size_t positives() const;
  std::size_t negatives() const;
  /// "real_pos=200 real_neg=1000 ..." in source order, zero counts included.
  std::string ToString() const;
};

struct PlanItem {
  SampleSource source = SampleSource::kRealPositive;
  std::size_t index = 0;  // position within the source for this epoch
};

struct EpochPlan {
  std::vector<PlanItem> items;  // shuffled
  SourceTally tally;
};

/// Sample plan for one epoch. Every real utterance appears once; concat
/// setups add as many concat-wake and as many concat-cw samples as there
/// are real positives; mask setups add one masked copy per real positive.
/// The order is shuffled with a stream keyed by (seed, epoch). Throws
/// kMissingSource when the setup needs a source the counts say is absent.
EpochPlan ComposeEpoch(TrainSetup setup, const SourceCounts& counts, std::uint64_t seed,
                       int epoch);

inline constexpr std::size_t kMaxCropPadFrames = 20;

/// floor(start_ms / shift_ms).
std::size_t StartFrame(double start_ms, const FrameSpec& spec = {});

/// The 121 frames starting at `origin`. A window that runs off the end by up
/// to kMaxCropPadFrames repeats the final frame; beyond that throws kTooShort.
FeatureWindow CropWindow(const LogMelMatrix& m, std::size_t origin);
FeatureWindow CropKeywordWindow(const LogMelMatrix& m, double start_ms,
                                const FrameSpec& spec = {});

struct DatasetOptions {
  std::vector<std::string> keyword = {"ni", "hao", "mi", "ya"};
  FrameSpec feature_spec;
  int sample_rate_hz = 16000;
  MaskSpec mask;
  /// Concatenated audio shorter than this is padded with low-level noise so
  /// that a full window can be cut from it.
  double concat_min_seconds = 1.6;
  double concat_pad_sigma = 0.002;
  /// Random negative windows start on multiples of this many frames.
  std::size_t negative_stride = 1;
};

/// Borrowed inputs; any pointer may be null when the source is absent.
struct DataSources {
  const Manifest* real = nullptr;
  const Manifest* synthetic = nullptr;
  const std::vector<SubwordSegment>* alignments = nullptr;
  const SubwordInventory* inventory = nullptr;
};

struct PreparedUtterance {
  std::string utt_id;
  Label label = Label::kNegative;
  Domain domain = Domain::kReal;
  std::shared_ptr<const Waveform> wave;
  LogMelMatrix features;       // CMVN applied
  std::optional<std::size_t> anchor_frame;  // crop origin when known
};

struct TrainSample {
  FeatureWindow x;
  Label label = Label::kNegative;
  Domain domain = Domain::kReal;
  SampleSource source = SampleSource::kRealPositive;
};

/// Loaded and featurized training material plus the online generators.
class TrainingData {
 public:
  /// Reads every referenced WAV and computes CMVN log-mel features once.
  TrainingData(const DatasetOptions& options, const DataSources& sources);

  const DatasetOptions& options() const { return options_; }
  SourceCounts counts() const;

  /// Builds the sample for one plan item. All randomness comes from `rng`.
  TrainSample Materialize(const PlanItem& item, Rng& rng) const;

  /// Concatenation of `recipe`, padded to concat_min_seconds.
  Waveform ConcatWave(const ConcatRecipe& recipe, Rng& rng) const;
  /// CMVN log-mel of a waveform with this dataset's front end.
  LogMelMatrix Featurize(const Waveform& w) const;

  const std::vector<PreparedUtterance>& real_positives() const { return real_pos_; }
  const std::vector<PreparedUtterance>& real_negatives() const { return real_neg_; }
  const std::vector<PreparedUtterance>& synthetic_positives() const { return syn_pos_; }
  const std::vector<PreparedUtterance>& synthetic_negatives() const { return syn_neg_; }
  const std::vector<ConcatRecipe>& confusion_recipes() const { return recipes_; }
  bool has_inventory() const { return inventory_ != nullptr; }

 private:
  FeatureWindow AnchoredOrRandom(const PreparedUtterance& u, Rng& rng) const;

  DatasetOptions options_;
  LogMelExtractor extractor_;
  const SubwordInventory* inventory_ = nullptr;
  std::vector<ConcatRecipe> recipes_;
  ConcatRecipe keyword_recipe_;
  std::vector<PreparedUtterance> real_pos_, real_neg_, syn_pos_, syn_neg_;
};

}  // namespace cwkws

#endif  // CWKWS_PIPELINE_DATASET_H_
