// include/cwkws/pipeline/train.h

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

#ifndef CWKWS_PIPELINE_TRAIN_H_
#define CWKWS_PIPELINE_TRAIN_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cwkws/models/checkpoint.h"
#include "cwkws/models/domain_classifier.h"
#include "cwkws/models/kws_cnn.h"
#include "cwkws/nn/optim.h"
#include "cwkws/pipeline/dataset.h"

namespace cwkws {

struct TrainConfig {
  TrainSetup setup = TrainSetup::kBaseline;
  int epochs = 100;
  nn::SgdConfig sgd;  // lr 0.1, momentum 0.9, Nesterov
  int plateau_patience = 5;
  double plateau_factor = 0.5;
  double min_lr = 1e-4;
  std::size_t batch = 64;
  std::uint64_t seed = 0;
  int threads = 1;
  CnnConfig cnn;
  std::size_t head_width = 128;  // fcA width of the embedding model

  void Validate() const;
};

/// Called after each epoch.
using EpochCallback = std::function<void(const EpochLog&, const SourceTally&)>;

struct KwsTrainResult {
  KwsModel model;
  CheckpointMeta meta;
};

/// Gradients are batch means. Each batch is split into a fixed number of
/// chunks whose partial sums are added in chunk order, so the result does
/// not depend on `threads`. Throws kMissingSource when an embedding setup
/// gets no classifier and kDivergedLoss on a non-finite loss.
KwsTrainResult TrainKws(const TrainConfig& cfg, const TrainingData& data,
                        const DomainClassifier* frozen_domain = nullptr,
                        const EpochCallback& on_epoch = {});

struct DomainUtterance {
  std::string utt_id;
  Domain domain = Domain::kReal;
  LogMelMatrix features;
};

struct DomainTrainConfig {
  int epochs = 8;
  nn::SgdConfig sgd{0.05, 0.9, true};
  std::size_t batch = 16;
  std::uint64_t seed = 0;
  int threads = 1;
  std::size_t hidden = 128;
  double heldout_fraction = 0.2;
  /// Longer utterances are cut to their first max_frames frames.
  std::size_t max_frames = 200;

  void Validate() const;
};

struct DomainTrainResult {
  DomainClassifier model;
  CheckpointMeta meta;
  double heldout_accuracy = 0.0;
  std::size_t n_train = 0;
  std::size_t n_heldout = 0;
};

/// Up to `per_domain` full utterances for each domain the data can supply:
/// real train audio, freshly concatenated keyword/confusion audio, and the
/// synthetic manifest.
std::vector<DomainUtterance> BuildDomainCorpus(const TrainingData& data, std::size_t per_domain,
                                               std::uint64_t seed);

/// Per domain, a seeded shuffle holds out the last heldout_fraction of the
/// utterances. Throws kInsufficientDomains with fewer than two populated
/// domains.
DomainTrainResult TrainDomainClassifier(const std::vector<DomainUtterance>& corpus,
                                        const DomainTrainConfig& cfg,
                                        const FrameSpec& feature_spec = {},
                                        const EpochCallback& on_epoch = {});

/// Fraction of utterances whose predicted domain matches the label.
double DomainAccuracy(const DomainClassifier& model, const std::vector<DomainUtterance>& corpus);

/// Writes "epoch,loss,lr" rows.
void WriteTrainLogCsv(const std::string& path, const std::vector<EpochLog>& log);

}  // namespace cwkws

#endif  // CWKWS_PIPELINE_TRAIN_H_
