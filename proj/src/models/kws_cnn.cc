// src/models/kws_cnn.cc

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

#include "cwkws/models/kws_cnn.h"

#include <cmath>

#include "cwkws/common/error.h"

namespace cwkws {

using nn::Parameter;
using nn::Tensor;

namespace {

// PyTorch-style defaults: U(+-1/sqrt(fan_in)) for weights and biases.
constexpr double kInitGain = 0.40824829046386302;  // 1/sqrt(6)

void InitLayer(Parameter& w, Parameter& b, std::size_t fan_in, Rng& rng) {
  nn::InitUniform(w, fan_in, kInitGain, rng);
  nn::InitUniform(b, fan_in, kInitGain, rng);
}

}  // namespace

void CnnConfig::Validate() const {
  if (input_frames < 8 || n_mels < 8)
    Fail(ErrorCode::kInvalidConfig, "CNN input must be at least 8x8");
  if (conv1_channels == 0 || conv2_channels == 0 || conv3_channels == 0 || fc_width == 0)
    Fail(ErrorCode::kInvalidConfig, "CNN widths must be positive");
}

CnnTrunk::CnnTrunk(const CnnConfig& cfg) : cfg_(cfg) {
  cfg_.Validate();
  const std::size_t chans[4] = {1, cfg.conv1_channels, cfg.conv2_channels, cfg.conv3_channels};
  for (int i = 0; i < 3; ++i) {
    const std::string n = "conv" + std::to_string(i + 1);
    conv_w_[i] = Parameter(n + ".weight", {chans[i + 1], chans[i], 3, 3});
    conv_b_[i] = Parameter(n + ".bias", {chans[i + 1]});
  }
  fc1_w_ = Parameter("fc1.weight", {cfg.fc_width, cfg.FlattenSize()});
  fc1_b_ = Parameter("fc1.bias", {cfg.fc_width});
}

Tensor CnnTrunk::InputTensor(const FeatureWindow& x) const {
  if (x.n_frames != cfg_.input_frames || x.n_mels != cfg_.n_mels ||
      x.values.size() != cfg_.input_frames * cfg_.n_mels)
    Fail(ErrorCode::kShapeMismatch,
         "model expects a " + std::to_string(cfg_.input_frames) + "x" +
             std::to_string(cfg_.n_mels) + " window, got " + std::to_string(x.n_frames) + "x" +
             std::to_string(x.n_mels));
  return Tensor({1, cfg_.input_frames, cfg_.n_mels}, x.values);
}

Tensor CnnTrunk::Forward(const Tensor& input, TrunkCache* cache) const {
  nn::ExpectShape(input, {1, cfg_.input_frames, cfg_.n_mels}, "cnn input");
  Tensor act = input;
  if (cache) cache->input = input;
  for (int i = 0; i < 3; ++i) {
    Tensor conv = nn::Conv2d(act, conv_w_[i].value, conv_b_[i].value,
                             cache ? &cache->cols[i] : nullptr);
    auto pooled = nn::MaxPool2(conv);
    act = nn::Relu(pooled.output);
    if (cache) {
      cache->conv_out[i] = std::move(conv);
      cache->argmax[i] = std::move(pooled.argmax);
      cache->pooled[i] = act;
    }
  }
  Tensor flat = act.Reshaped({act.size()});
  Tensor hidden = nn::Relu(nn::Linear(flat, fc1_w_.value, fc1_b_.value));
  if (cache) {
    cache->flat = std::move(flat);
    cache->hidden = hidden;
  }
  return hidden;
}

void CnnTrunk::Backward(const TrunkCache& cache, const Tensor& grad_hidden,
                        std::span<Tensor> grads) const {
  Tensor g = nn::ReluBackward(cache.hidden, grad_hidden);
  Tensor g_flat;
  nn::LinearBackward(cache.flat, fc1_w_.value, g, &g_flat, grads[6], grads[7]);
  g = g_flat.Reshaped(cache.pooled[2].shape());
  for (int i = 2; i >= 0; --i) {
    g = nn::ReluBackward(cache.pooled[i], g);
    g = nn::MaxPool2Backward(g, cache.argmax[i], cache.conv_out[i].shape());
    const Tensor& conv_input = i == 0 ? cache.input : cache.pooled[i - 1];
    Tensor g_in;
    nn::Conv2dBackward(conv_input, conv_w_[i].value, g, i == 0 ? nullptr : &g_in,
                       grads[2 * i], grads[2 * i + 1], &cache.cols[i]);
    g = std::move(g_in);
  }
}

void CnnTrunk::Init(Rng& rng) {
  const std::size_t chans[3] = {1, cfg_.conv1_channels, cfg_.conv2_channels};
  for (int i = 0; i < 3; ++i) InitLayer(conv_w_[i], conv_b_[i], chans[i] * 9, rng);
  InitLayer(fc1_w_, fc1_b_, cfg_.FlattenSize(), rng);
}

nn::ParameterList CnnTrunk::Params() {
  return {&conv_w_[0], &conv_b_[0], &conv_w_[1], &conv_b_[1],
          &conv_w_[2], &conv_b_[2], &fc1_w_,     &fc1_b_};
}

std::vector<const Parameter*> CnnTrunk::Params() const {
  return {&conv_w_[0], &conv_b_[0], &conv_w_[1], &conv_b_[1],
          &conv_w_[2], &conv_b_[2], &fc1_w_,     &fc1_b_};
}

std::vector<nn::Shape> CnnTrunk::TraceShapes() const {
  TrunkCache cache;
  Forward(Tensor({1, cfg_.input_frames, cfg_.n_mels}), &cache);
  return {cache.pooled[0].shape(), cache.pooled[1].shape(), cache.pooled[2].shape(),
          cache.flat.shape(), cache.hidden.shape()};
}

Posterior SoftmaxPosterior(const Tensor& logits) {
  const Tensor p = nn::Softmax(logits);
  return {p[ClassIndex(Label::kPositive)], p[ClassIndex(Label::kNegative)]};
}

std::vector<Tensor> MakeGradBuffer(std::span<const Parameter* const> params) {
  std::vector<Tensor> out;
  out.reserve(params.size());
  for (const auto* p : params) out.emplace_back(p->value.shape());
  return out;
}

std::vector<Tensor> MakeGradBuffer(std::span<Parameter* const> params) {
  std::vector<const Parameter*> c(params.begin(), params.end());
  return MakeGradBuffer(std::span<const Parameter* const>(c));
}

// ---- KwsCnn ----

KwsCnn::KwsCnn(const CnnConfig& cfg)
    : trunk_(cfg),
      fc2_w_("fc2.weight", {2, cfg.fc_width}),
      fc2_b_("fc2.bias", {2}) {}

Tensor KwsCnn::Logits(const Tensor& input, KwsCache* cache) const {
  Tensor hidden = trunk_.Forward(input, cache ? &cache->trunk : nullptr);
  Tensor logits = nn::Linear(hidden, fc2_w_.value, fc2_b_.value);
  if (cache) cache->logits = logits;
  return logits;
}

Posterior KwsCnn::Forward(const FeatureWindow& x) const {
  return SoftmaxPosterior(Logits(trunk_.InputTensor(x), nullptr));
}

double KwsCnn::TrainExample(const FeatureWindow& x, std::span<const double> embedding,
                            Label label, std::span<Tensor> grads) const {
  if (!embedding.empty())
    Fail(ErrorCode::kShapeMismatch, "the baseline CNN takes no domain embedding");
  KwsCache cache;
  Tensor logits = Logits(trunk_.InputTensor(x), &cache);
  auto xent = nn::SoftmaxXent(logits, static_cast<std::size_t>(ClassIndex(label)));
  Tensor g_hidden;
  nn::LinearBackward(cache.trunk.hidden, fc2_w_.value, xent.grad, &g_hidden,
                     grads[CnnTrunk::kParamCount], grads[CnnTrunk::kParamCount + 1]);
  trunk_.Backward(cache.trunk, g_hidden, grads);
  return xent.loss;
}

void KwsCnn::Init(Rng& rng) {
  trunk_.Init(rng);
  InitLayer(fc2_w_, fc2_b_, config().fc_width, rng);
}

nn::ParameterList KwsCnn::Params() {
  auto p = trunk_.Params();
  p.push_back(&fc2_w_);
  p.push_back(&fc2_b_);
  return p;
}

std::vector<const Parameter*> KwsCnn::Params() const {
  auto p = trunk_.Params();
  p.push_back(&fc2_w_);
  p.push_back(&fc2_b_);
  return p;
}

std::vector<nn::Shape> KwsCnn::TraceShapes() const {
  auto shapes = trunk_.TraceShapes();
  shapes.push_back(fc2_b_.value.shape());
  return shapes;
}

// ---- EmbKwsCnn ----

EmbKwsCnn::EmbKwsCnn(const CnnConfig& cfg, std::size_t embedding_dim, std::size_t head_width)
    : trunk_(cfg),
      embedding_dim_(embedding_dim),
      head_width_(head_width),
      fc_a_w_("fcA.weight", {head_width, cfg.fc_width + embedding_dim}),
      fc_a_b_("fcA.bias", {head_width}),
      fc_b_w_("fcB.weight", {2, head_width}),
      fc_b_b_("fcB.bias", {2}) {
  if (embedding_dim == 0 || head_width == 0)
    Fail(ErrorCode::kInvalidConfig, "embedding and head widths must be positive");
}

Tensor EmbKwsCnn::Logits(const Tensor& input, std::span<const double> embedding,
                         EmbKwsCache* cache) const {
  if (embedding.size() != embedding_dim_)
    Fail(ErrorCode::kShapeMismatch, "expected a " + std::to_string(embedding_dim_) +
                                        "-dim embedding, got " +
                                        std::to_string(embedding.size()));
  Tensor hidden = trunk_.Forward(input, cache ? &cache->trunk : nullptr);
  Tensor e({embedding_dim_}, std::vector<double>(embedding.begin(), embedding.end()));
  Tensor joined = nn::Concat(hidden, e);
  Tensor head = nn::Relu(nn::Linear(joined, fc_a_w_.value, fc_a_b_.value));
  Tensor logits = nn::Linear(head, fc_b_w_.value, fc_b_b_.value);
  if (cache) {
    cache->joined = std::move(joined);
    cache->head = std::move(head);
    cache->logits = logits;
  }
  return logits;
}

Posterior EmbKwsCnn::Forward(const FeatureWindow& x, std::span<const double> embedding) const {
  return SoftmaxPosterior(Logits(trunk_.InputTensor(x), embedding, nullptr));
}

double EmbKwsCnn::TrainExample(const FeatureWindow& x, std::span<const double> embedding,
                               Label label, std::span<Tensor> grads) const {
  EmbKwsCache cache;
  Tensor logits = Logits(trunk_.InputTensor(x), embedding, &cache);
  auto xent = nn::SoftmaxXent(logits, static_cast<std::size_t>(ClassIndex(label)));
  constexpr std::size_t k = CnnTrunk::kParamCount;
  Tensor g_head;
  nn::LinearBackward(cache.head, fc_b_w_.value, xent.grad, &g_head, grads[k + 2], grads[k + 3]);
  g_head = nn::ReluBackward(cache.head, g_head);
  Tensor g_joined;
  nn::LinearBackward(cache.joined, fc_a_w_.value, g_head, &g_joined, grads[k], grads[k + 1]);
  // Only the trunk half continues; the embedding half is discarded.
  Tensor g_hidden({config().fc_width},
                  std::vector<double>(g_joined.values().begin(),
                                      g_joined.values().begin() +
                                          static_cast<std::ptrdiff_t>(config().fc_width)));
  trunk_.Backward(cache.trunk, g_hidden, grads);
  return xent.loss;
}

void EmbKwsCnn::Init(Rng& rng) {
  trunk_.Init(rng);
  InitLayer(fc_a_w_, fc_a_b_, config().fc_width + embedding_dim_, rng);
  InitLayer(fc_b_w_, fc_b_b_, head_width_, rng);
}

nn::ParameterList EmbKwsCnn::Params() {
  auto p = trunk_.Params();
  p.insert(p.end(), {&fc_a_w_, &fc_a_b_, &fc_b_w_, &fc_b_b_});
  return p;
}

std::vector<const Parameter*> EmbKwsCnn::Params() const {
  auto p = trunk_.Params();
  p.insert(p.end(), {&fc_a_w_, &fc_a_b_, &fc_b_w_, &fc_b_b_});
  return p;
}

}  // namespace cwkws
