// src/models/domain_classifier.cc

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

#include "cwkws/models/domain_classifier.h"

#include <algorithm>
#include <cmath>

#include "cwkws/common/error.h"
#include "cwkws/nn/layers.h"

namespace cwkws {

using nn::Parameter;
using nn::Tensor;

void DomainClassifierConfig::Validate() const {
  if (input_dim == 0 || hidden == 0)
    Fail(ErrorCode::kInvalidConfig, "domain classifier widths must be positive");
  if (domains.size() < 2)
    Fail(ErrorCode::kInsufficientDomains, "domain classifier needs >= 2 domains");
}

DomainClassifier::DomainClassifier(const DomainClassifierConfig& cfg)
    : cfg_(cfg),
      l1_w_ih_("lstm1.w_ih", {4 * cfg.hidden, cfg.input_dim}),
      l1_w_hh_("lstm1.w_hh", {4 * cfg.hidden, cfg.hidden}),
      l1_b_("lstm1.bias", {4 * cfg.hidden}),
      l2_w_ih_("lstm2.w_ih", {4 * cfg.hidden, cfg.hidden}),
      l2_w_hh_("lstm2.w_hh", {4 * cfg.hidden, cfg.hidden}),
      l2_b_("lstm2.bias", {4 * cfg.hidden}),
      fc_w_("fc.weight", {cfg.domains.size(), cfg.hidden}),
      fc_b_("fc.bias", {cfg.domains.size()}) {
  cfg_.Validate();
}

Tensor DomainClassifier::FramesTensor(std::span<const double> values, std::size_t n_frames,
                                      std::size_t n_mels) const {
  if (n_frames == 0) Fail(ErrorCode::kEmptyFeatures, "domain classifier got zero frames");
  if (n_mels != cfg_.input_dim)
    Fail(ErrorCode::kShapeMismatch, "domain classifier expects " +
                                        std::to_string(cfg_.input_dim) + "-dim frames, got " +
                                        std::to_string(n_mels));
  return Tensor({n_frames, n_mels}, std::vector<double>(values.begin(), values.end()));
}

Tensor DomainClassifier::Logits(const Tensor& frames, DomainCache* cache) const {
  nn::LstmCache c1, c2;
  Tensor h1 = nn::LstmForward(frames, {l1_w_ih_.value, l1_w_hh_.value, l1_b_.value},
                              cache ? &c1 : nullptr);
  Tensor h2 = nn::LstmForward(h1, {l2_w_ih_.value, l2_w_hh_.value, l2_b_.value},
                              cache ? &c2 : nullptr);
  Tensor emb = nn::MeanPoolTime(h2);
  Tensor logits = nn::Linear(emb, fc_w_.value, fc_b_.value);
  if (cache) {
    cache->lstm1 = std::move(c1);
    cache->lstm2 = std::move(c2);
    cache->embedding = emb;
    cache->logits = logits;
  }
  return logits;
}

std::vector<double> DomainClassifier::Embed(const LogMelMatrix& m) const {
  DomainCache cache;
  Logits(FramesTensor(m.values, m.n_frames, m.n_mels), &cache);
  return cache.embedding.vec();
}

std::vector<double> DomainClassifier::Embed(const FeatureWindow& w) const {
  DomainCache cache;
  Logits(FramesTensor(w.values, w.n_frames, w.n_mels), &cache);
  return cache.embedding.vec();
}

DomainPrediction DomainClassifier::Classify(const LogMelMatrix& m) const {
  Tensor p = nn::Softmax(Logits(FramesTensor(m.values, m.n_frames, m.n_mels), nullptr));
  DomainPrediction out;
  out.posteriors = p.vec();
  out.index = static_cast<std::size_t>(
      std::max_element(out.posteriors.begin(), out.posteriors.end()) - out.posteriors.begin());
  out.domain = cfg_.domains[out.index];
  return out;
}

double DomainClassifier::TrainExample(const LogMelMatrix& m, std::size_t domain_index,
                                      std::span<Tensor> grads) const {
  DomainCache cache;
  Tensor logits = Logits(FramesTensor(m.values, m.n_frames, m.n_mels), &cache);
  auto xent = nn::SoftmaxXent(logits, domain_index);
  Tensor g_emb;
  nn::LinearBackward(cache.embedding, fc_w_.value, xent.grad, &g_emb, grads[6], grads[7]);
  Tensor g_h2 = nn::MeanPoolTimeBackward(g_emb, m.n_frames);
  Tensor g_h1 = nn::LstmBackward(cache.lstm2, {l2_w_ih_.value, l2_w_hh_.value, l2_b_.value},
                                 g_h2, {grads[3], grads[4], grads[5]});
  nn::LstmBackward(cache.lstm1, {l1_w_ih_.value, l1_w_hh_.value, l1_b_.value}, g_h1,
                   {grads[0], grads[1], grads[2]});
  return xent.loss;
}

std::size_t DomainClassifier::DomainIndex(Domain d) const {
  auto it = std::find(cfg_.domains.begin(), cfg_.domains.end(), d);
  if (it == cfg_.domains.end())
    Fail(ErrorCode::kInvalidConfig,
         "domain '" + std::string(DomainName(d)) + "' not modeled by this classifier");
  return static_cast<std::size_t>(it - cfg_.domains.begin());
}

void DomainClassifier::Init(Rng& rng) {
  // U(+-1/sqrt(hidden)) for every LSTM tensor, as in common toolkits.
  const double bound = 1.0 / std::sqrt(static_cast<double>(cfg_.hidden));
  for (Parameter* p : {&l1_w_ih_, &l1_w_hh_, &l1_b_, &l2_w_ih_, &l2_w_hh_, &l2_b_}) {
    for (double& v : p->value.values()) v = rng.Uniform(-bound, bound);
  }
  for (Parameter* p : {&fc_w_, &fc_b_}) {
    for (double& v : p->value.values()) v = rng.Uniform(-bound, bound);
  }
  for (Parameter* p : Params()) {
    p->grad.SetZero();
    p->velocity.SetZero();
  }
}

nn::ParameterList DomainClassifier::Params() {
  return {&l1_w_ih_, &l1_w_hh_, &l1_b_, &l2_w_ih_, &l2_w_hh_, &l2_b_, &fc_w_, &fc_b_};
}

std::vector<const Parameter*> DomainClassifier::Params() const {
  return {&l1_w_ih_, &l1_w_hh_, &l1_b_, &l2_w_ih_, &l2_w_hh_, &l2_b_, &fc_w_, &fc_b_};
}

}  // namespace cwkws
