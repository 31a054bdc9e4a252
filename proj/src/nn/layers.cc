// src/nn/layers.cc

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

#include "cwkws/nn/layers.h"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "cwkws/common/error.h"

namespace cwkws::nn {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMatrix>;
using ConstMatMap = Eigen::Map<const RowMatrix>;
using VecMap = Eigen::Map<Eigen::VectorXd>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;

void CheckConvShapes(const Tensor& input, const Tensor& weights, const Tensor& bias) {
  if (input.rank() != 3 || weights.rank() != 4 || bias.rank() != 1)
    Fail(ErrorCode::kShapeMismatch, "conv2d expects input CxHxW, weights OxCx3x3, bias O");
  if (weights.dim(1) != input.dim(0) || weights.dim(2) != 3 || weights.dim(3) != 3 ||
      bias.dim(0) != weights.dim(0) || input.dim(1) < 1 || input.dim(2) < 1)
    Fail(ErrorCode::kShapeMismatch, "conv2d: input " + ShapeString(input.shape()) +
                                        ", weights " + ShapeString(weights.shape()) +
                                        ", bias " + ShapeString(bias.shape()));
}

// cols[(c*9 + ky*3 + kx) * HW + y*W + x] = in[c, y+ky-1, x+kx-1] (0 outside).
void Im2Col(const Tensor& input, Buffer& cols) {
  const std::size_t C = input.dim(0), H = input.dim(1), W = input.dim(2);
  const std::size_t HW = H * W;
  cols.resize(C * 9 * HW);
  const double* in = input.data();
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t ky = 0; ky < 3; ++ky) {
      for (std::size_t kx = 0; kx < 3; ++kx) {
        double* dst = cols.data() + ((c * 9 + ky * 3 + kx) * HW);
        const std::size_t x_begin = kx == 0 ? 1 : 0;
        const std::size_t x_end = kx == 2 ? W - 1 : W;
        for (std::size_t y = 0; y < H; ++y) {
          double* row = dst + y * W;
          const std::ptrdiff_t sy = static_cast<std::ptrdiff_t>(y + ky) - 1;
          if (sy < 0 || sy >= static_cast<std::ptrdiff_t>(H) || x_end <= x_begin) {
            std::fill(row, row + W, 0.0);
            continue;
          }
          const double* src = in + (c * H + static_cast<std::size_t>(sy)) * W;
          if (x_begin > 0) row[0] = 0.0;
          if (x_end < W) row[W - 1] = 0.0;
          std::memcpy(row + x_begin, src + x_begin + kx - 1, (x_end - x_begin) * sizeof(double));
        }
      }
    }
  }
}

void Col2Im(const Buffer& cols, Tensor& grad_input) {
  const std::size_t C = grad_input.dim(0), H = grad_input.dim(1), W = grad_input.dim(2);
  const std::size_t HW = H * W;
  grad_input.SetZero();
  double* out = grad_input.data();
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t ky = 0; ky < 3; ++ky) {
      for (std::size_t kx = 0; kx < 3; ++kx) {
        const double* src = cols.data() + ((c * 9 + ky * 3 + kx) * HW);
        const std::size_t x_begin = kx == 0 ? 1 : 0;
        const std::size_t x_end = kx == 2 ? W - 1 : W;
        if (x_end <= x_begin) continue;
        for (std::size_t y = 0; y < H; ++y) {
          const std::ptrdiff_t sy = static_cast<std::ptrdiff_t>(y + ky) - 1;
          if (sy < 0 || sy >= static_cast<std::ptrdiff_t>(H)) continue;
          double* dst = out + (c * H + static_cast<std::size_t>(sy)) * W;
          const double* s = src + y * W;
          for (std::size_t x = x_begin; x < x_end; ++x) dst[x + kx - 1] += s[x];
        }
      }
    }
  }
}

thread_local Buffer tl_cols;
thread_local Buffer tl_grad_cols;

}  // namespace

Tensor Conv2d(const Tensor& input, const Tensor& weights, const Tensor& bias,
              Buffer* cols_out) {
  CheckConvShapes(input, weights, bias);
  const std::size_t C_out = weights.dim(0), K = weights.dim(1) * 9;
  const std::size_t H = input.dim(1), W = input.dim(2), HW = H * W;
  Buffer& unfolded = cols_out ? *cols_out : tl_cols;
  Im2Col(input, unfolded);
  Tensor out({C_out, H, W});
  MatMap o(out.data(), static_cast<Eigen::Index>(C_out), static_cast<Eigen::Index>(HW));
  ConstMatMap w(weights.data(), static_cast<Eigen::Index>(C_out), static_cast<Eigen::Index>(K));
  ConstMatMap cols(unfolded.data(), static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(HW));
  o.noalias() = w * cols;
  for (std::size_t oc = 0; oc < C_out; ++oc) o.row(static_cast<Eigen::Index>(oc)).array() += bias[oc];
  return out;
}

void Conv2dBackward(const Tensor& input, const Tensor& weights, const Tensor& grad_output,
                    Tensor* grad_input, Tensor& grad_weights, Tensor& grad_bias,
                    const Buffer* cached_cols) {
  const std::size_t C_out = weights.dim(0), K = weights.dim(1) * 9;
  const std::size_t H = input.dim(1), W = input.dim(2), HW = H * W;
  ExpectShape(grad_output, {C_out, H, W}, "conv2d grad_output");
  ExpectShape(grad_weights, weights.shape(), "conv2d grad_weights");
  ExpectShape(grad_bias, {C_out}, "conv2d grad_bias");

  const double* unfolded = nullptr;
  if (cached_cols && cached_cols->size() == K * HW) {
    unfolded = cached_cols->data();
  } else {
    Im2Col(input, tl_cols);
    unfolded = tl_cols.data();
  }
  ConstMatMap go(grad_output.data(), static_cast<Eigen::Index>(C_out),
                 static_cast<Eigen::Index>(HW));
  ConstMatMap cols(unfolded, static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(HW));
  MatMap gw(grad_weights.data(), static_cast<Eigen::Index>(C_out), static_cast<Eigen::Index>(K));
  gw.noalias() += go * cols.transpose();
  VecMap gb(grad_bias.data(), static_cast<Eigen::Index>(C_out));
  gb += go.rowwise().sum();

  if (grad_input) {
    if (grad_input->shape() != input.shape()) *grad_input = Tensor(input.shape());
    tl_grad_cols.resize(K * HW);
    MatMap gcols(tl_grad_cols.data(), static_cast<Eigen::Index>(K),
                 static_cast<Eigen::Index>(HW));
    ConstMatMap w(weights.data(), static_cast<Eigen::Index>(C_out),
                  static_cast<Eigen::Index>(K));
    gcols.noalias() = w.transpose() * go;
    Col2Im(tl_grad_cols, *grad_input);
  }
}

Conv2dGrads Conv2dBackward(const Tensor& input, const Tensor& weights,
                           const Tensor& grad_output) {
  Conv2dGrads g{Tensor(input.shape()), Tensor(weights.shape()), Tensor({weights.dim(0)})};
  Conv2dBackward(input, weights, grad_output, &g.input, g.weights, g.bias);
  return g;
}

PoolResult MaxPool2(const Tensor& input) {
  if (input.rank() != 3 || input.dim(1) < 2 || input.dim(2) < 2)
    Fail(ErrorCode::kShapeMismatch, "maxpool2 needs CxHxW with H, W >= 2, got " +
                                        ShapeString(input.shape()));
  const std::size_t C = input.dim(0), H = input.dim(1), W = input.dim(2);
  const std::size_t OH = H / 2, OW = W / 2;
  PoolResult r{Tensor({C, OH, OW}), std::vector<std::uint32_t>(C * OH * OW)};
  const double* in = input.data();
  double* out = r.output.data();
  std::size_t o = 0;
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t y = 0; y < OH; ++y) {
      for (std::size_t x = 0; x < OW; ++x, ++o) {
        const std::size_t base = (c * H + 2 * y) * W + 2 * x;
        std::size_t best = base;
        double v = in[base];
        for (std::size_t idx : {base + 1, base + W, base + W + 1}) {
          if (in[idx] > v) {
            v = in[idx];
            best = idx;
          }
        }
        out[o] = v;
        r.argmax[o] = static_cast<std::uint32_t>(best);
      }
    }
  }
  return r;
}

Tensor MaxPool2Backward(const Tensor& grad_output, const std::vector<std::uint32_t>& argmax,
                        const Shape& input_shape) {
  if (argmax.size() != grad_output.size())
    Fail(ErrorCode::kShapeMismatch, "maxpool2 backward: index count mismatch");
  Tensor g(input_shape);
  for (std::size_t i = 0; i < argmax.size(); ++i) g[argmax[i]] += grad_output[i];
  return g;
}

Tensor Relu(const Tensor& x) {
  Tensor y = x;
  for (double& v : y.values()) v = v > 0.0 ? v : 0.0;
  return y;
}

Tensor ReluBackward(const Tensor& output, const Tensor& grad_output) {
  if (output.size() != grad_output.size())
    Fail(ErrorCode::kShapeMismatch, "relu backward size mismatch");
  Tensor g(grad_output.shape());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = output[i] > 0.0 ? grad_output[i] : 0.0;
  return g;
}

Tensor Linear(const Tensor& input, const Tensor& weights, const Tensor& bias) {
  if (weights.rank() != 2 || bias.rank() != 1 || input.size() != weights.dim(1) ||
      bias.dim(0) != weights.dim(0))
    Fail(ErrorCode::kShapeMismatch, "linear: input " + ShapeString(input.shape()) +
                                        ", weights " + ShapeString(weights.shape()) +
                                        ", bias " + ShapeString(bias.shape()));
  const auto m = static_cast<Eigen::Index>(weights.dim(0));
  const auto n = static_cast<Eigen::Index>(weights.dim(1));
  Tensor out({weights.dim(0)});
  VecMap y(out.data(), m);
  y.noalias() = ConstMatMap(weights.data(), m, n) * ConstVecMap(input.data(), n);
  y += ConstVecMap(bias.data(), m);
  return out;
}

void LinearBackward(const Tensor& input, const Tensor& weights, const Tensor& grad_output,
                    Tensor* grad_input, Tensor& grad_weights, Tensor& grad_bias) {
  const auto m = static_cast<Eigen::Index>(weights.dim(0));
  const auto n = static_cast<Eigen::Index>(weights.dim(1));
  if (grad_output.size() != weights.dim(0) || input.size() != weights.dim(1))
    Fail(ErrorCode::kShapeMismatch, "linear backward shape mismatch");
  ExpectShape(grad_weights, weights.shape(), "linear grad_weights");
  ConstVecMap gy(grad_output.data(), m);
  MatMap(grad_weights.data(), m, n).noalias() += gy * ConstVecMap(input.data(), n).transpose();
  VecMap(grad_bias.data(), m) += gy;
  if (grad_input) {
    if (grad_input->shape() != input.shape()) *grad_input = Tensor(input.shape());
    VecMap(grad_input->data(), n).noalias() = ConstMatMap(weights.data(), m, n).transpose() * gy;
  }
}

Tensor MeanPoolTime(const Tensor& h) {
  if (h.rank() != 2 || h.dim(0) < 1)
    Fail(ErrorCode::kShapeMismatch, "mean pool expects T x d with T >= 1");
  const std::size_t T = h.dim(0), d = h.dim(1);
  Tensor out({d});
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t j = 0; j < d; ++j) out[j] += h.at(t, j);
  for (double& v : out.values()) v /= static_cast<double>(T);
  return out;
}

Tensor MeanPoolTimeBackward(const Tensor& grad_output, std::size_t steps) {
  const std::size_t d = grad_output.size();
  Tensor g({steps, d});
  const double scale = 1.0 / static_cast<double>(steps);
  for (std::size_t t = 0; t < steps; ++t)
    for (std::size_t j = 0; j < d; ++j) g.at(t, j) = grad_output[j] * scale;
  return g;
}

Tensor Softmax(const Tensor& logits) {
  Tensor p = logits;
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : logits.values()) mx = std::max(mx, v);
  double sum = 0.0;
  for (double& v : p.values()) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : p.values()) v /= sum;
  return p;
}

XentResult SoftmaxXent(const Tensor& logits, std::size_t target) {
  if (logits.size() < 2) Fail(ErrorCode::kShapeMismatch, "softmax needs >= 2 classes");
  if (target >= logits.size())
    Fail(ErrorCode::kBadTarget, "target " + std::to_string(target) + " >= " +
                                    std::to_string(logits.size()) + " classes");
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : logits.values()) mx = std::max(mx, v);
  double sum = 0.0;
  for (double v : logits.values()) sum += std::exp(v - mx);
  const double log_z = mx + std::log(sum);
  XentResult r{log_z - logits[target], Tensor(logits.shape())};
  for (std::size_t k = 0; k < logits.size(); ++k) r.grad[k] = std::exp(logits[k] - log_z);
  r.grad[target] -= 1.0;
  return r;
}

Tensor Concat(const Tensor& a, const Tensor& b) {
  std::vector<double> v(a.values().begin(), a.values().end());
  v.insert(v.end(), b.values().begin(), b.values().end());
  const std::size_t n = v.size();
  return Tensor({n}, std::move(v));
}

}  // namespace cwkws::nn
