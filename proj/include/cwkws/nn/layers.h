// include/cwkws/nn/layers.h

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

#ifndef CWKWS_NN_LAYERS_H_
#define CWKWS_NN_LAYERS_H_

#include <cstdint>
#include <vector>

#include "cwkws/nn/tensor.h"

namespace cwkws::nn {

// Stateless layer kernels. Backward functions *accumulate* parameter
// gradients (+=) so several samples can share one buffer, and *overwrite*
// the input gradient.

// ---- 3x3 convolution, stride 1, zero padding 1 ("same") ----

/// input [C_in x H x W], weights [C_out x C_in x 3 x 3], bias [C_out]
/// -> [C_out x H x W]. Cross-correlation plus bias.
/// When `cols` is non-null it receives the unfolded input, which
/// Conv2dBackward can reuse instead of unfolding again.
Tensor Conv2d(const Tensor& input, const Tensor& weights, const Tensor& bias,
              Buffer* cols = nullptr);

/// grad_input may be null when the caller does not need it.
void Conv2dBackward(const Tensor& input, const Tensor& weights, const Tensor& grad_output,
                    Tensor* grad_input, Tensor& grad_weights, Tensor& grad_bias,
                    const Buffer* cols = nullptr);

struct Conv2dGrads {
  Tensor input;
  Tensor weights;
  Tensor bias;
};
Conv2dGrads Conv2dBackward(const Tensor& input, const Tensor& weights,
                           const Tensor& grad_output);

// ---- 2x2 max pooling, stride 2, floor semantics ----

struct PoolResult {
  Tensor output;
  /// Flat input index of each output cell's maximum (first in scan order on ties).
  std::vector<std::uint32_t> argmax;
};

/// [C x H x W] -> [C x floor(H/2) x floor(W/2)]; H, W >= 2.
PoolResult MaxPool2(const Tensor& input);
Tensor MaxPool2Backward(const Tensor& grad_output, const std::vector<std::uint32_t>& argmax,
                        const Shape& input_shape);

// ---- elementwise ----

Tensor Relu(const Tensor& x);
/// Uses the forward output: gradient passes where output > 0.
Tensor ReluBackward(const Tensor& output, const Tensor& grad_output);

// ---- dense ----

/// W [m x n], b [m], x [n] -> W x + b.
Tensor Linear(const Tensor& input, const Tensor& weights, const Tensor& bias);
void LinearBackward(const Tensor& input, const Tensor& weights, const Tensor& grad_output,
                    Tensor* grad_input, Tensor& grad_weights, Tensor& grad_bias);

/// h [T x d] -> [d], arithmetic mean over rows.
Tensor MeanPoolTime(const Tensor& h);
Tensor MeanPoolTimeBackward(const Tensor& grad_output, std::size_t steps);

// ---- classification head ----

Tensor Softmax(const Tensor& logits);

struct XentResult {
  double loss = 0.0;
  Tensor grad;  // softmax - one_hot(target)
};

/// -log softmax(logits)[target] with max subtraction. Throws kBadTarget.
XentResult SoftmaxXent(const Tensor& logits, std::size_t target);

/// Concatenates two vectors.
Tensor Concat(const Tensor& a, const Tensor& b);

}  // namespace cwkws::nn

#endif  // CWKWS_NN_LAYERS_H_
