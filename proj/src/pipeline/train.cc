// src/pipeline/train.cc

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

#include "cwkws/pipeline/train.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <thread>

#include "cwkws/common/error.h"
#include "cwkws/common/file_io.h"

namespace cwkws {
namespace {

// Fixed split of every batch; see TrainKws.
constexpr std::size_t kGradChunks = 8;

// Sample streams, kept distinct so adding one kind of draw never shifts
// another.
constexpr std::uint64_t kInitStream = 0x494E4954ULL;
constexpr std::uint64_t kSampleStream = 0x534D504CULL;
constexpr std::uint64_t kDomainStream = 0x444F4D4EULL;

std::vector<nn::Tensor> ZeroLike(const nn::ParameterList& params) {
  std::vector<nn::Tensor> out;
  out.reserve(params.size());
  for (const auto* p : params) out.emplace_back(p->value.shape());
  return out;
}

// Runs `fn(item, grads)` for items [0, n) split into kGradChunks contiguous
// chunks, then writes the mean gradient into the parameters. Returns the
// summed loss.
template <typename Fn>
double BatchGradient(std::size_t n, int threads, const nn::ParameterList& params,
                     std::vector<std::vector<nn::Tensor>>& chunk_grads, Fn&& fn) {
  const std::size_t chunks = std::min(kGradChunks, n);
  if (chunk_grads.size() < chunks) chunk_grads.resize(chunks);
  std::vector<double> chunk_loss(chunks, 0.0);
  for (std::size_t c = 0; c < chunks; ++c) {
    if (chunk_grads[c].empty()) chunk_grads[c] = ZeroLike(params);
    for (auto& g : chunk_grads[c]) g.SetZero();
  }
  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * n / chunks, end = (c + 1) * n / chunks;
    for (std::size_t i = begin; i < end; ++i) chunk_loss[c] += fn(i, chunk_grads[c]);
  };
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t c = t; c < chunks; c += workers) run_chunk(c);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  const double inv = 1.0 / static_cast<double>(n);
  double loss = 0.0;
  for (std::size_t k = 0; k < params.size(); ++k) {
    double* g = params[k]->grad.data();
    const std::size_t size = params[k]->grad.size();
    std::fill(g, g + size, 0.0);
    for (std::size_t c = 0; c < chunks; ++c) {
      const double* src = chunk_grads[c][k].data();
      for (std::size_t i = 0; i < size; ++i) g[i] += src[i];
    }
    for (std::size_t i = 0; i < size; ++i) g[i] *= inv;
  }
  for (double l : chunk_loss) loss += l;
  return loss;
}

void CheckFinite(double loss, const char* what, int epoch) {
  if (!std::isfinite(loss))
    Fail(ErrorCode::kDivergedLoss,
         std::string(what) + " loss became non-finite in epoch " + std::to_string(epoch));
}

}  // namespace

void TrainConfig::Validate() const {
  if (epochs < 1) Fail(ErrorCode::kInvalidConfig, "epochs must be >= 1");
  if (batch < 1) Fail(ErrorCode::kInvalidConfig, "batch must be >= 1");
  if (threads < 1) Fail(ErrorCode::kInvalidConfig, "threads must be >= 1");
  sgd.Validate();
  cnn.Validate();
  nn::PlateauScheduler s;
  s.lr = sgd.lr;
  s.patience = plateau_patience;
  s.factor = plateau_factor;
  s.min_lr = min_lr;
  s.Validate();
}

KwsTrainResult TrainKws(const TrainConfig& cfg, const TrainingData& data,
                        const DomainClassifier* frozen_domain, const EpochCallback& on_epoch) {
  cfg.Validate();
  const bool use_emb = SetupUsesEmbedding(cfg.setup);
  if (use_emb && !frozen_domain)
    Fail(ErrorCode::kMissingSource, "setup real+all+emb needs a trained domain classifier");

  KwsModel model = use_emb ? KwsModel(EmbKwsCnn(cfg.cnn, frozen_domain->embedding_dim(),
                                                cfg.head_width))
                           : KwsModel(KwsCnn(cfg.cnn));
  {
    Rng init = Rng::Derive(cfg.seed, {kInitStream});
    std::visit([&](auto& m) { m.Init(init); }, model);
  }
  nn::ParameterList params = ModelParams(model);

  CheckpointMeta meta;
  meta.setup = std::string(SetupName(cfg.setup));
  meta.seed = cfg.seed;
  meta.feature_spec = data.options().feature_spec;
  if (use_emb) meta.domains = frozen_domain->config().domains;

  nn::SgdConfig sgd = cfg.sgd;
  nn::PlateauScheduler sched;
  sched.lr = sgd.lr;
  sched.patience = cfg.plateau_patience;
  sched.factor = cfg.plateau_factor;
  sched.min_lr = cfg.min_lr;

  const SourceCounts counts = data.counts();
  std::vector<std::vector<nn::Tensor>> chunk_grads;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const EpochPlan plan = ComposeEpoch(cfg.setup, counts, cfg.seed, epoch);
    double epoch_loss = 0.0;
    for (std::size_t b0 = 0; b0 < plan.items.size(); b0 += cfg.batch) {
      const std::size_t b1 = std::min(plan.items.size(), b0 + cfg.batch);
      double loss = 0.0;
      {
        nn::LookaheadScope lookahead(params, sgd);
        loss = BatchGradient(b1 - b0, cfg.threads, params, chunk_grads,
                             [&](std::size_t i, std::vector<nn::Tensor>& grads) {
                               const std::size_t idx = b0 + i;
                               Rng rng = Rng::Derive(cfg.seed, {kSampleStream,
                                                                static_cast<std::uint64_t>(epoch),
                                                                static_cast<std::uint64_t>(idx)});
                               TrainSample s = data.Materialize(plan.items[idx], rng);
                               if (const auto* m = std::get_if<KwsCnn>(&model))
                                 return m->TrainExample(s.x, {}, s.label, grads);
                               const auto emb = frozen_domain->Embed(s.x);
                               return std::get<EmbKwsCnn>(model).TrainExample(s.x, emb, s.label,
                                                                              grads);
                             });
      }
      CheckFinite(loss, "keyword model", epoch);
      nn::SgdStep(params, sgd);
      epoch_loss += loss;
    }
    epoch_loss /= static_cast<double>(plan.items.size());
    const EpochLog log{epoch, epoch_loss, sgd.lr};
    meta.train_log.push_back(log);
    if (on_epoch) on_epoch(log, plan.tally);
    sgd.lr = nn::PlateauStep(sched, epoch_loss);
  }
  for (auto* p : params) {
    p->grad.SetZero();
    p->velocity.SetZero();
  }
  return {std::move(model), std::move(meta)};
}

void DomainTrainConfig::Validate() const {
  if (epochs < 1) Fail(ErrorCode::kInvalidConfig, "domain epochs must be >= 1");
  if (batch < 1) Fail(ErrorCode::kInvalidConfig, "domain batch must be >= 1");
  if (threads < 1) Fail(ErrorCode::kInvalidConfig, "threads must be >= 1");
  if (!(heldout_fraction >= 0.0 && heldout_fraction < 1.0))
    Fail(ErrorCode::kInvalidConfig, "heldout_fraction must lie in [0, 1)");
  if (max_frames < 1) Fail(ErrorCode::kInvalidConfig, "max_frames must be >= 1");
  sgd.Validate();
}

std::vector<DomainUtterance> BuildDomainCorpus(const TrainingData& data, std::size_t per_domain,
                                               std::uint64_t seed) {
  std::vector<DomainUtterance> out;
  auto take = [&](std::vector<const PreparedUtterance*> pool, std::uint64_t key) {
    Rng rng = Rng::Derive(seed, {kDomainStream, key});
    rng.Shuffle(pool.begin(), pool.end());
    if (pool.size() > per_domain) pool.resize(per_domain);
    for (const auto* u : pool) out.push_back({u->utt_id, u->domain, u->features});
  };
  std::vector<const PreparedUtterance*> real, syn;
  for (const auto& u : data.real_positives()) real.push_back(&u);
  for (const auto& u : data.real_negatives()) real.push_back(&u);
  for (const auto& u : data.synthetic_positives()) syn.push_back(&u);
  for (const auto& u : data.synthetic_negatives()) syn.push_back(&u);
  take(real, 1);
  if (data.has_inventory()) {
    const ConcatRecipe wake = KeywordRecipe(data.options().keyword);
    const auto& cw = data.confusion_recipes();
    for (std::size_t i = 0; i < per_domain; ++i) {
      Rng rng = Rng::Derive(seed, {kDomainStream, 2, i});
      const ConcatRecipe& r = i % 2 == 0 ? wake : cw[rng.UniformIndex(cw.size())];
      out.push_back({"concat-" + std::to_string(i), Domain::kConcat,
                     data.Featurize(data.ConcatWave(r, rng))});
    }
  }
  take(syn, 3);
  return out;
}

namespace {

LogMelMatrix Truncated(const LogMelMatrix& m, std::size_t max_frames) {
  if (m.n_frames <= max_frames) return m;
  LogMelMatrix t;
  t.n_frames = max_frames;
  t.n_mels = m.n_mels;
  t.values.assign(m.values.begin(),
                  m.values.begin() + static_cast<std::ptrdiff_t>(max_frames * m.n_mels));
  return t;
}

}  // namespace

double DomainAccuracy(const DomainClassifier& model, const std::vector<DomainUtterance>& corpus) {
  if (corpus.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& u : corpus) hits += model.Classify(u.features).domain == u.domain;
  return static_cast<double>(hits) / static_cast<double>(corpus.size());
}

DomainTrainResult TrainDomainClassifier(const std::vector<DomainUtterance>& corpus,
                                        const DomainTrainConfig& cfg,
                                        const FrameSpec& feature_spec,
                                        const EpochCallback& on_epoch) {
  cfg.Validate();
  std::map<Domain, std::vector<const DomainUtterance*>> by_domain;
  for (const auto& u : corpus) {
    if (u.features.n_frames == 0)
      Fail(ErrorCode::kEmptyFeatures, "domain utterance " + u.utt_id + " has no frames");
    by_domain[u.domain].push_back(&u);
  }
  if (by_domain.size() < 2)
    Fail(ErrorCode::kInsufficientDomains,
         "domain classifier needs samples from at least two domains, got " +
             std::to_string(by_domain.size()));

  DomainClassifierConfig dcfg;
  dcfg.hidden = cfg.hidden;
  dcfg.input_dim = corpus.front().features.n_mels;
  dcfg.domains.clear();
  for (const auto& [d, _] : by_domain) dcfg.domains.push_back(d);

  std::vector<DomainUtterance> train, heldout;
  for (auto& [d, list] : by_domain) {
    Rng rng = Rng::Derive(cfg.seed, {kDomainStream, 0x53504C54ULL, static_cast<std::uint64_t>(d)});
    rng.Shuffle(list.begin(), list.end());
    std::size_t n_held = static_cast<std::size_t>(
        std::ceil(cfg.heldout_fraction * static_cast<double>(list.size())));
    if (list.size() < 2) n_held = 0;
    const std::size_t n_train = list.size() - n_held;
    for (std::size_t i = 0; i < list.size(); ++i) {
      DomainUtterance u{list[i]->utt_id, d, Truncated(list[i]->features, cfg.max_frames)};
      (i < n_train ? train : heldout).push_back(std::move(u));
    }
  }

  DomainClassifier model(dcfg);
  {
    Rng init = Rng::Derive(cfg.seed, {kInitStream, 1});
    model.Init(init);
  }
  nn::ParameterList params = model.Params();
  nn::SgdConfig sgd = cfg.sgd;
  nn::PlateauScheduler sched;
  sched.lr = sgd.lr;

  std::vector<std::size_t> targets(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) targets[i] = model.DomainIndex(train[i].domain);

  CheckpointMeta meta;
  meta.setup = "domain";
  meta.seed = cfg.seed;
  meta.feature_spec = feature_spec;
  meta.domains = dcfg.domains;

  std::vector<std::vector<nn::Tensor>> chunk_grads;
  std::vector<std::size_t> order(train.size());
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng shuffle = Rng::Derive(cfg.seed, {kDomainStream, 0x5348ULL, static_cast<std::uint64_t>(epoch)});
    shuffle.Shuffle(order.begin(), order.end());
    double epoch_loss = 0.0;
    for (std::size_t b0 = 0; b0 < order.size(); b0 += cfg.batch) {
      const std::size_t b1 = std::min(order.size(), b0 + cfg.batch);
      double loss = 0.0;
      {
        nn::LookaheadScope lookahead(params, sgd);
        loss = BatchGradient(b1 - b0, cfg.threads, params, chunk_grads,
                             [&](std::size_t i, std::vector<nn::Tensor>& grads) {
                               const std::size_t k = order[b0 + i];
                               return model.TrainExample(train[k].features, targets[k], grads);
                             });
      }
      CheckFinite(loss, "domain classifier", epoch);
      nn::SgdStep(params, sgd);
      epoch_loss += loss;
    }
    epoch_loss /= static_cast<double>(std::max<std::size_t>(order.size(), 1));
    const EpochLog log{epoch, epoch_loss, sgd.lr};
    meta.train_log.push_back(log);
    if (on_epoch) on_epoch(log, SourceTally{});
    sgd.lr = nn::PlateauStep(sched, epoch_loss);
  }
  for (auto* p : params) {
    p->grad.SetZero();
    p->velocity.SetZero();
  }

  DomainTrainResult result{std::move(model), std::move(meta), 0.0, train.size(), heldout.size()};
  result.heldout_accuracy = DomainAccuracy(result.model, heldout.empty() ? train : heldout);
  return result;
}

void WriteTrainLogCsv(const std::string& path, const std::vector<EpochLog>& log) {
  std::string out = "epoch,loss,lr\n";
  char buf[96];
  for (const auto& e : log) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", e.epoch, e.loss, e.lr);
    out += buf;
  }
  WriteStringToFile(path, out);
}

}  // namespace cwkws
