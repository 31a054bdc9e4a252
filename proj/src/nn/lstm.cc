// src/nn/lstm.cc

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

#include "cwkws/nn/lstm.h"

#include <Eigen/Core>
#include <cmath>

#include "cwkws/common/error.h"

namespace cwkws::nn {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMatrix>;
using ConstMatMap = Eigen::Map<const RowMatrix>;
using VecMap = Eigen::Map<Eigen::VectorXd>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Eigen::Index Idx(std::size_t v) { return static_cast<Eigen::Index>(v); }

}  // namespace

Tensor LstmForward(const Tensor& inputs, const LstmWeights& w, LstmCache* cache) {
  if (inputs.rank() != 2 || inputs.dim(0) < 1 || w.w_ih.rank() != 2 || w.w_hh.rank() != 2)
    Fail(ErrorCode::kShapeMismatch, "lstm expects inputs T x d_in with T >= 1");
  const std::size_t T = inputs.dim(0), d = inputs.dim(1);
  const std::size_t h = w.w_hh.dim(1);
  const std::size_t g4 = 4 * h;
  if (w.w_ih.dim(0) != g4 || w.w_ih.dim(1) != d || w.w_hh.dim(0) != g4 || w.bias.size() != g4)
    Fail(ErrorCode::kShapeMismatch, "lstm weights: w_ih " + ShapeString(w.w_ih.shape()) +
                                        ", w_hh " + ShapeString(w.w_hh.shape()) + ", bias " +
                                        ShapeString(w.bias.shape()) + " for input dim " +
                                        std::to_string(d));

  Tensor z({T, g4});
  MatMap zm(z.data(), Idx(T), Idx(g4));
  zm.noalias() = ConstMatMap(inputs.data(), Idx(T), Idx(d)) *
                 ConstMatMap(w.w_ih.data(), Idx(g4), Idx(d)).transpose();
  zm.rowwise() += ConstVecMap(w.bias.data(), Idx(g4)).transpose();

  Tensor hidden({T, h});
  Tensor cells({T, h});
  Tensor tanh_c({T, h});
  ConstMatMap whh(w.w_hh.data(), Idx(g4), Idx(h));
  Eigen::VectorXd c_prev = Eigen::VectorXd::Zero(Idx(h));
  for (std::size_t t = 0; t < T; ++t) {
    double* zt = z.data() + t * g4;
    if (t > 0) VecMap(zt, Idx(g4)).noalias() += whh * ConstVecMap(hidden.data() + (t - 1) * h, Idx(h));
    for (std::size_t j = 0; j < h; ++j) {
      const double ig = Sigmoid(zt[j]);
      const double fg = Sigmoid(zt[h + j]);
      const double gg = std::tanh(zt[2 * h + j]);
      const double og = Sigmoid(zt[3 * h + j]);
      zt[j] = ig;
      zt[h + j] = fg;
      zt[2 * h + j] = gg;
      zt[3 * h + j] = og;
      const double c = fg * c_prev[Idx(j)] + ig * gg;
      const double tc = std::tanh(c);
      cells.at(t, j) = c;
      tanh_c.at(t, j) = tc;
      hidden.at(t, j) = og * tc;
      c_prev[Idx(j)] = c;
    }
  }
  if (cache) {
    cache->inputs = inputs;
    cache->gates = std::move(z);
    cache->cells = std::move(cells);
    cache->tanh_c = std::move(tanh_c);
    cache->hidden = hidden;
  }
  return hidden;
}

Tensor LstmBackward(const LstmCache& cache, const LstmWeights& w, const Tensor& grad_hidden,
                    const LstmGradSink& sink) {
  const std::size_t T = cache.inputs.dim(0), d = cache.inputs.dim(1);
  const std::size_t h = cache.hidden.dim(1), g4 = 4 * h;
  ExpectShape(grad_hidden, {T, h}, "lstm grad_hidden");

  Tensor dz({T, g4});
  ConstMatMap whh(w.w_hh.data(), Idx(g4), Idx(h));
  Eigen::VectorXd dh_next = Eigen::VectorXd::Zero(Idx(h));
  Eigen::VectorXd dc_next = Eigen::VectorXd::Zero(Idx(h));
  for (std::size_t step = T; step-- > 0;) {
    const double* gt = cache.gates.data() + step * g4;
    double* dzt = dz.data() + step * g4;
    for (std::size_t j = 0; j < h; ++j) {
      const double ig = gt[j], fg = gt[h + j], gg = gt[2 * h + j], og = gt[3 * h + j];
      const double tc = cache.tanh_c.at(step, j);
      const double dh = grad_hidden.at(step, j) + dh_next[Idx(j)];
      const double dc = dh * og * (1.0 - tc * tc) + dc_next[Idx(j)];
      const double c_prev = step > 0 ? cache.cells.at(step - 1, j) : 0.0;
      dzt[j] = dc * gg * ig * (1.0 - ig);
      dzt[h + j] = dc * c_prev * fg * (1.0 - fg);
      dzt[2 * h + j] = dc * ig * (1.0 - gg * gg);
      dzt[3 * h + j] = dh * tc * og * (1.0 - og);
      dc_next[Idx(j)] = dc * fg;
    }
    dh_next.noalias() = whh.transpose() * ConstVecMap(dzt, Idx(g4));
  }

  ConstMatMap dzm(dz.data(), Idx(T), Idx(g4));
  ConstMatMap x(cache.inputs.data(), Idx(T), Idx(d));
  MatMap(sink.w_ih.data(), Idx(g4), Idx(d)).noalias() += dzm.transpose() * x;
  if (T > 1) {
    MatMap(sink.w_hh.data(), Idx(g4), Idx(h)).noalias() +=
        dzm.bottomRows(Idx(T - 1)).transpose() *
        ConstMatMap(cache.hidden.data(), Idx(T), Idx(h)).topRows(Idx(T - 1));
  }
  VecMap(sink.bias.data(), Idx(g4)) += dzm.colwise().sum().transpose();

  Tensor dx({T, d});
  MatMap(dx.data(), Idx(T), Idx(d)).noalias() =
      dzm * ConstMatMap(w.w_ih.data(), Idx(g4), Idx(d));
  return dx;
}

}  // namespace cwkws::nn
