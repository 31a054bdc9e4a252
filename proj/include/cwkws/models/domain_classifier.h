// include/cwkws/models/domain_classifier.h

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

#ifndef CWKWS_MODELS_DOMAIN_CLASSIFIER_H_
#define CWKWS_MODELS_DOMAIN_CLASSIFIER_H_

#include <span>
#include <vector>

#include "cwkws/common/labels.h"
#include "cwkws/common/rng.h"
#include "cwkws/features/log_mel.h"
#include "cwkws/nn/lstm.h"
#include "cwkws/nn/optim.h"

namespace cwkws {

struct DomainClassifierConfig {
  std::size_t input_dim = 80;
  std::size_t hidden = 128;  // also the embedding width
  std::vector<Domain> domains = {kAllDomains.begin(), kAllDomains.end()};

  void Validate() const;
};

struct DomainPrediction {
  std::size_t index = 0;  // into config().domains
  Domain domain = Domain::kReal;
  std::vector<double> posteriors;
};

struct DomainCache {
  nn::LstmCache lstm1;
  nn::LstmCache lstm2;
  nn::Tensor embedding;
  nn::Tensor logits;
};

/// Two stacked LSTMs, mean pooling over time, and a linear layer over the
/// domains. The pooled vector is the domain embedding.
class DomainClassifier {
 public:
  static constexpr const char* kArchitecture = "domain_lstm";

  explicit DomainClassifier(const DomainClassifierConfig& cfg = {});

  const DomainClassifierConfig& config() const { return cfg_; }
  std::size_t embedding_dim() const { return cfg_.hidden; }
  std::size_t n_domains() const { return cfg_.domains.size(); }

  /// Throws kEmptyFeatures on zero frames, kShapeMismatch on a wrong width.
  std::vector<double> Embed(const LogMelMatrix& m) const;
  std::vector<double> Embed(const FeatureWindow& w) const;
  DomainPrediction Classify(const LogMelMatrix& m) const;

  nn::Tensor Logits(const nn::Tensor& frames, DomainCache* cache) const;

  /// Loss for one labeled utterance; accumulates gradients into `grads`.
  double TrainExample(const LogMelMatrix& m, std::size_t domain_index,
                      std::span<nn::Tensor> grads) const;

  /// Position of `d` in config().domains; throws kInvalidConfig if absent.
  std::size_t DomainIndex(Domain d) const;

  void Init(Rng& rng);
  nn::ParameterList Params();
  std::vector<const nn::Parameter*> Params() const;

 private:
  nn::Tensor FramesTensor(std::span<const double> values, std::size_t n_frames,
                          std::size_t n_mels) const;

  DomainClassifierConfig cfg_;
  nn::Parameter l1_w_ih_, l1_w_hh_, l1_b_;
  nn::Parameter l2_w_ih_, l2_w_hh_, l2_b_;
  nn::Parameter fc_w_, fc_b_;
};

}  // namespace cwkws

#endif  // CWKWS_MODELS_DOMAIN_CLASSIFIER_H_
