// include/cwkws/models/kws_cnn.h

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

#ifndef CWKWS_MODELS_KWS_CNN_H_
#define CWKWS_MODELS_KWS_CNN_H_

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cwkws/common/labels.h"
#include "cwkws/common/rng.h"
#include "cwkws/features/log_mel.h"
#include "cwkws/nn/layers.h"
#include "cwkws/nn/optim.h"

namespace cwkws {

/// Geometry of the convolutional keyword classifier. Three 3x3 same-padded
/// convolutions, each followed by 2x2 max pooling and ReLU, then a ReLU fully
/// connected layer. Defaults give 121x80 -> 32x60x40 -> 64x30x20 -> 64x15x10
/// -> 9600 -> 128.
struct CnnConfig {
  std::size_t input_frames = kWindowFrames;
  std::size_t n_mels = 80;
  std::size_t conv1_channels = 32;
  std::size_t conv2_channels = 64;
  std::size_t conv3_channels = 64;
  std::size_t fc_width = 128;

  std::size_t PooledHeight() const { return input_frames / 2 / 2 / 2; }
  std::size_t PooledWidth() const { return n_mels / 2 / 2 / 2; }
  std::size_t FlattenSize() const { return conv3_channels * PooledHeight() * PooledWidth(); }
  void Validate() const;
};

/// (p_keyword, p_filler); sums to 1.
struct Posterior {
  double keyword = 0.5;
  double filler = 0.5;
};

/// Activations kept by a training forward pass.
struct TrunkCache {
  nn::Tensor input;
  nn::Tensor conv_out[3];
  nn::Buffer cols[3];  // unfolded conv inputs
  std::vector<std::uint32_t> argmax[3];
  nn::Tensor pooled[3];  // post-ReLU
  nn::Tensor flat;
  nn::Tensor hidden;     // fc1 output, post-ReLU
};

/// conv1..conv3 + fc1. Parameters are owned by the enclosing model.
class CnnTrunk {
 public:
  explicit CnnTrunk(const CnnConfig& cfg);

  const CnnConfig& config() const { return cfg_; }

  /// Throws kShapeMismatch unless the window is input_frames x n_mels.
  nn::Tensor InputTensor(const FeatureWindow& x) const;

  nn::Tensor Forward(const nn::Tensor& input, TrunkCache* cache) const;
  /// `grads` holds one tensor per trunk parameter, in Params() order.
  void Backward(const TrunkCache& cache, const nn::Tensor& grad_hidden,
                std::span<nn::Tensor> grads) const;

  void Init(Rng& rng);
  nn::ParameterList Params();
  std::vector<const nn::Parameter*> Params() const;
  static constexpr std::size_t kParamCount = 8;

  /// Activation shapes: pool1, pool2, pool3, flatten, fc1.
  std::vector<nn::Shape> TraceShapes() const;

 private:
  CnnConfig cfg_;
  nn::Parameter conv_w_[3];
  nn::Parameter conv_b_[3];
  nn::Parameter fc1_w_;
  nn::Parameter fc1_b_;
};

struct KwsCache {
  TrunkCache trunk;
  nn::Tensor logits;
};

/// Baseline detector: trunk -> fc2 (fc_width -> 2) -> softmax. Class 1 is
/// the keyword.
class KwsCnn {
 public:
  static constexpr const char* kArchitecture = "kws_cnn";

  explicit KwsCnn(const CnnConfig& cfg = {});

  const CnnConfig& config() const { return trunk_.config(); }

  Posterior Forward(const FeatureWindow& x) const;
  nn::Tensor Logits(const nn::Tensor& input, KwsCache* cache) const;

  /// One training example: returns the loss and accumulates gradients.
  /// `embedding` must be empty.
  double TrainExample(const FeatureWindow& x, std::span<const double> embedding, Label label,
                      std::span<nn::Tensor> grads) const;

  void Init(Rng& rng);
  nn::ParameterList Params();
  std::vector<const nn::Parameter*> Params() const;

  /// Activation shapes through the trunk plus the logits.
  std::vector<nn::Shape> TraceShapes() const;

  CnnTrunk& trunk() { return trunk_; }
  const CnnTrunk& trunk() const { return trunk_; }

 private:
  CnnTrunk trunk_;
  nn::Parameter fc2_w_;
  nn::Parameter fc2_b_;
};

struct EmbKwsCache {
  TrunkCache trunk;
  nn::Tensor joined;   // [fc1 out ; embedding]
  nn::Tensor head;     // fcA output, post-ReLU
  nn::Tensor logits;
};

/// Domain-conditioned detector: trunk -> concat(fc1 out, embedding) ->
/// fcA (fc_width + emb_dim -> head_width, ReLU) -> fcB (-> 2) -> softmax.
/// The embedding is an input; no gradient flows into its producer.
class EmbKwsCnn {
 public:
  static constexpr const char* kArchitecture = "emb_kws_cnn";

  EmbKwsCnn(const CnnConfig& cfg = {}, std::size_t embedding_dim = 128,
            std::size_t head_width = 128);

  const CnnConfig& config() const { return trunk_.config(); }
  std::size_t embedding_dim() const { return embedding_dim_; }
  std::size_t head_width() const { return head_width_; }

  Posterior Forward(const FeatureWindow& x, std::span<const double> embedding) const;
  nn::Tensor Logits(const nn::Tensor& input, std::span<const double> embedding,
                    EmbKwsCache* cache) const;

  double TrainExample(const FeatureWindow& x, std::span<const double> embedding, Label label,
                      std::span<nn::Tensor> grads) const;

  void Init(Rng& rng);
  nn::ParameterList Params();
  std::vector<const nn::Parameter*> Params() const;

  CnnTrunk& trunk() { return trunk_; }
  const CnnTrunk& trunk() const { return trunk_; }
  nn::Parameter& fc_a_weights() { return fc_a_w_; }
  nn::Parameter& fc_a_bias() { return fc_a_b_; }
  nn::Parameter& fc_b_weights() { return fc_b_w_; }
  nn::Parameter& fc_b_bias() { return fc_b_b_; }

 private:
  CnnTrunk trunk_;
  std::size_t embedding_dim_;
  std::size_t head_width_;
  nn::Parameter fc_a_w_;
  nn::Parameter fc_a_b_;
  nn::Parameter fc_b_w_;
  nn::Parameter fc_b_b_;
};

using KwsModel = std::variant<KwsCnn, EmbKwsCnn>;

Posterior SoftmaxPosterior(const nn::Tensor& logits);

/// Fresh zeroed gradient buffer shaped like `params`.
std::vector<nn::Tensor> MakeGradBuffer(std::span<const nn::Parameter* const> params);
std::vector<nn::Tensor> MakeGradBuffer(std::span<nn::Parameter* const> params);
inline std::vector<nn::Tensor> MakeGradBuffer(const nn::ParameterList& params) {
  return MakeGradBuffer(std::span<nn::Parameter* const>(params));
}

}  // namespace cwkws

#endif  // CWKWS_MODELS_KWS_CNN_H_
