// include/cwkws/nn/lstm.h

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

#ifndef CWKWS_NN_LSTM_H_
#define CWKWS_NN_LSTM_H_

#include "cwkws/nn/tensor.h"

namespace cwkws::nn {

// Single-direction LSTM layer with zero initial state. Gate rows are stacked
// in the order input, forget, cell candidate, output:
//   z_t = W_ih x_t + W_hh h_{t-1} + b            (4h)
//   i, f, o = sigmoid(z_i, z_f, z_o);  g = tanh(z_g)
//   c_t = f * c_{t-1} + i * g;         h_t = o * tanh(c_t)

struct LstmWeights {
  const Tensor& w_ih;  // [4h x d_in]
  const Tensor& w_hh;  // [4h x h]
  const Tensor& bias;  // [4h]
};

struct LstmCache {
  Tensor inputs;   // [T x d_in]
  Tensor gates;    // [T x 4h], post-activation
  Tensor cells;    // [T x h]
  Tensor tanh_c;   // [T x h]
  Tensor hidden;   // [T x h]
};

/// Returns the hidden sequence [T x h]; fills `cache` when non-null.
Tensor LstmForward(const Tensor& inputs, const LstmWeights& w, LstmCache* cache = nullptr);

struct LstmGradSink {
  Tensor& w_ih;
  Tensor& w_hh;
  Tensor& bias;
};

/// Backpropagation through time. Accumulates weight gradients into `sink`
/// and returns d loss / d inputs [T x d_in].
Tensor LstmBackward(const LstmCache& cache, const LstmWeights& w, const Tensor& grad_hidden,
                    const LstmGradSink& sink);

}  // namespace cwkws::nn

#endif  // CWKWS_NN_LSTM_H_
