// include/cwkws/nn/optim.h

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

#ifndef CWKWS_NN_OPTIM_H_
#define CWKWS_NN_OPTIM_H_

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cwkws/common/rng.h"
#include "cwkws/nn/tensor.h"

namespace cwkws::nn {

/// Trainable weights with their gradient and momentum buffers.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
  Tensor velocity;

  Parameter() = default;
  Parameter(std::string n, Shape shape)
      : name(std::move(n)), value(shape), grad(shape), velocity(shape) {}

  void ZeroGrad() { grad.SetZero(); }
};

using ParameterList = std::vector<Parameter*>;

void ZeroGrads(std::span<Parameter* const> params);

/// Uniform(-bound, bound) initialization, bound = sqrt(6 / fan_in) * gain.
void InitUniform(Parameter& p, std::size_t fan_in, double gain, Rng& rng);

/// FNV-1a over the raw bytes of every parameter value, in order.
std::uint64_t ParameterChecksum(std::span<const Parameter* const> params);
std::uint64_t ParameterChecksum(std::span<Parameter* const> params);
inline std::uint64_t ParameterChecksum(const std::vector<const Parameter*>& params) {
  return ParameterChecksum(std::span<const Parameter* const>(params));
}
inline std::uint64_t ParameterChecksum(const ParameterList& params) {
  return ParameterChecksum(std::span<Parameter* const>(params));
}

struct SgdConfig {
  double lr = 0.1;
  double momentum = 0.9;
  bool nesterov = true;

  void Validate() const;
};

/// Momentum update with gradients taken at the lookahead point w + mu*v:
///   v <- mu * v - lr * grad
///   w <- w + v
/// With nesterov = false the gradient is taken at w (classical momentum);
/// the update formula is the same.
void SgdStep(std::span<Parameter* const> params, const SgdConfig& cfg);

/// Moves every parameter to its Nesterov lookahead point w + mu * v for the
/// lifetime of the scope and restores the exact original weights on exit.
/// Forward/backward inside the scope therefore produce lookahead gradients.
class LookaheadScope {
 public:
  LookaheadScope(std::span<Parameter* const> params, const SgdConfig& cfg);
  ~LookaheadScope();
  LookaheadScope(const LookaheadScope&) = delete;
  LookaheadScope& operator=(const LookaheadScope&) = delete;

 private:
  std::vector<Parameter*> params_;
  std::vector<std::vector<double>> saved_;
};

/// Reduce-on-plateau learning-rate schedule driven by the epoch loss.
struct PlateauScheduler {
  double lr = 0.1;
  int patience = 5;
  double factor = 0.5;
  double min_lr = 1e-4;
  double best_loss = std::numeric_limits<double>::infinity();
  int stale_count = 0;

  void Validate() const;
};

/// If loss < best - 1e-6 the loss becomes the new best; otherwise the stale
/// count grows, and on reaching `patience` the rate is multiplied by
/// `factor` (floored at min_lr) and the count resets. Returns the new rate.
double PlateauStep(PlateauScheduler& s, double epoch_loss);

// ---- finite-difference verification ----

struct GradCheckOptions {
  double eps = 1e-5;
  /// Denominator floor for the relative error |a - n| / max(|a|, |n|, floor).
  double scale_floor = 1e-7;
  /// When > 0, only this many randomly chosen entries per tensor are probed.
  std::size_t max_entries_per_tensor = 0;
  std::uint64_t seed = 0;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t entries_checked = 0;
  std::string worst_tensor;
};

/// Compares `analytic` gradients (one per probed tensor, already computed)
/// with central differences of `loss`, perturbing the tensors in `probed`.
GradCheckResult GradCheck(const std::function<double()>& loss, std::span<Tensor* const> probed,
                          std::span<const Tensor* const> analytic,
                          std::span<const std::string> names,
                          const GradCheckOptions& options = {});

/// Convenience: probes parameter values against parameter grads.
GradCheckResult GradCheckParameters(const std::function<double()>& loss,
                                    std::span<Parameter* const> params,
                                    const GradCheckOptions& options = {});

}  // namespace cwkws::nn

#endif  // CWKWS_NN_OPTIM_H_
