// src/nn/optim.cc

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

#include "cwkws/nn/optim.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "cwkws/common/error.h"

namespace cwkws::nn {

void ZeroGrads(std::span<Parameter* const> params) {
  for (auto* p : params) p->ZeroGrad();
}

void InitUniform(Parameter& p, std::size_t fan_in, double gain, Rng& rng) {
  const double bound = gain * std::sqrt(6.0 / static_cast<double>(std::max<std::size_t>(fan_in, 1)));
  for (double& v : p.value.values()) v = rng.Uniform(-bound, bound);
  p.grad.SetZero();
  p.velocity.SetZero();
}

namespace {

std::uint64_t Fnv1a(std::uint64_t h, const void* data, std::size_t n) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t ParameterChecksum(std::span<const Parameter* const> params) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const auto* p : params) h = Fnv1a(h, p->value.data(), p->value.size() * sizeof(double));
  return h;
}

std::uint64_t ParameterChecksum(std::span<Parameter* const> params) {
  std::vector<const Parameter*> c(params.begin(), params.end());
  return ParameterChecksum(std::span<const Parameter* const>(c));
}

void SgdConfig::Validate() const {
  if (!(lr > 0.0)) Fail(ErrorCode::kInvalidConfig, "learning rate must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0))
    Fail(ErrorCode::kInvalidConfig, "momentum must lie in [0, 1)");
}

void SgdStep(std::span<Parameter* const> params, const SgdConfig& cfg) {
  for (auto* p : params) {
    double* w = p->value.data();
    double* v = p->velocity.data();
    const double* g = p->grad.data();
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      v[i] = cfg.momentum * v[i] - cfg.lr * g[i];
      w[i] += v[i];
    }
  }
}

LookaheadScope::LookaheadScope(std::span<Parameter* const> params, const SgdConfig& cfg)
    : params_(params.begin(), params.end()) {
  if (!cfg.nesterov || cfg.momentum == 0.0) {
    params_.clear();
    return;
  }
  saved_.reserve(params_.size());
  for (auto* p : params_) {
    saved_.push_back(p->value.vec());
    double* w = p->value.data();
    const double* v = p->velocity.data();
    for (std::size_t i = 0; i < p->value.size(); ++i) w[i] += cfg.momentum * v[i];
  }
}

LookaheadScope::~LookaheadScope() {
  for (std::size_t k = 0; k < params_.size(); ++k)
    std::memcpy(params_[k]->value.data(), saved_[k].data(), saved_[k].size() * sizeof(double));
}

void PlateauScheduler::Validate() const {
  if (!(factor > 0.0 && factor < 1.0))
    Fail(ErrorCode::kInvalidConfig, "plateau factor must lie in (0, 1)");
  if (patience < 1) Fail(ErrorCode::kInvalidConfig, "plateau patience must be >= 1");
  if (!(lr > 0.0) || !(min_lr > 0.0))
    Fail(ErrorCode::kInvalidConfig, "learning rates must be positive");
}

double PlateauStep(PlateauScheduler& s, double epoch_loss) {
  if (epoch_loss < s.best_loss - 1e-6) {
    s.best_loss = epoch_loss;
    s.stale_count = 0;
  } else {
    ++s.stale_count;
    if (s.stale_count >= s.patience) {
      s.lr = std::max(s.lr * s.factor, s.min_lr);
      s.stale_count = 0;
    }
  }
  return s.lr;
}

GradCheckResult GradCheck(const std::function<double()>& loss, std::span<Tensor* const> probed,
                          std::span<const Tensor* const> analytic,
                          std::span<const std::string> names,
                          const GradCheckOptions& options) {
  if (probed.size() != analytic.size())
    Fail(ErrorCode::kShapeMismatch, "grad check: probed/analytic count mismatch");
  GradCheckResult result;
  Rng rng(options.seed);
  for (std::size_t k = 0; k < probed.size(); ++k) {
    Tensor& t = *probed[k];
    const Tensor& a = *analytic[k];
    if (t.size() != a.size())
      Fail(ErrorCode::kShapeMismatch, "grad check: analytic gradient shape differs");
    std::vector<std::size_t> idx(t.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (options.max_entries_per_tensor > 0 && idx.size() > options.max_entries_per_tensor) {
      rng.Shuffle(idx.begin(), idx.end());
      idx.resize(options.max_entries_per_tensor);
    }
    for (std::size_t i : idx) {
      const double orig = t[i];
      t[i] = orig + options.eps;
      const double up = loss();
      t[i] = orig - options.eps;
      const double down = loss();
      t[i] = orig;
      const double numeric = (up - down) / (2.0 * options.eps);
      const double denom =
          std::max({std::abs(a[i]), std::abs(numeric), options.scale_floor});
      const double rel = std::abs(a[i] - numeric) / denom;
      ++result.entries_checked;
      if (rel > result.max_rel_error) {
        result.max_rel_error = rel;
        result.worst_tensor = k < names.size() ? names[k] : std::to_string(k);
      }
    }
  }
  return result;
}

GradCheckResult GradCheckParameters(const std::function<double()>& loss,
                                    std::span<Parameter* const> params,
                                    const GradCheckOptions& options) {
  std::vector<Tensor*> probed;
  std::vector<const Tensor*> analytic;
  std::vector<std::string> names;
  for (auto* p : params) {
    probed.push_back(&p->value);
    analytic.push_back(&p->grad);
    names.push_back(p->name);
  }
  return GradCheck(loss, probed, analytic, names, options);
}

}  // namespace cwkws::nn
