// src/cli/commands.cc

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

#include "cwkws/cli/commands.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "cwkws/cli/run_config.h"
#include "cwkws/cli/toy_corpus.h"
#include "cwkws/common/error.h"
#include "cwkws/common/file_io.h"
#include "cwkws/features/feature_cache.h"
#include "cwkws/models/checkpoint.h"
#include "cwkws/pipeline/train.h"

namespace cwkws {

namespace fs = std::filesystem;

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> setup;
  std::optional<std::string> sets;
  std::optional<std::string> fa;
  std::optional<int> epochs;
  std::string out;
  std::vector<std::string> models;
  std::vector<std::string> params;
  bool dry_run = false;
  double scale = 1.0;
  double test_scale = 0.0;
};

template <typename Fn>
void ParallelFor(std::size_t n, int threads, Fn&& fn) {
  const auto workers =
      static_cast<std::size_t>(std::clamp<long>(threads, 1, static_cast<long>(std::max<std::size_t>(n, 1))));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

RunConfig ResolveConfig(const Flags& f) {
  RunConfig cfg;
  if (!f.config.empty()) {
    cfg = LoadRunConfig(f.config);
  } else if (fs::exists("cwkws.conf")) {
    cfg = LoadRunConfig("cwkws.conf");
  } else {
    cfg.base_dir = ".";
  }
  for (const auto& p : f.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos)
      Fail(ErrorCode::kInvalidConfig, "--param wants KEY=VALUE, got '" + p + "'");
    cfg.Set(p.substr(0, eq), p.substr(eq + 1));
  }
  if (f.seed) {
    cfg.train.seed = *f.seed;
    cfg.domain.seed = *f.seed;
  }
  if (f.threads) {
    cfg.train.threads = *f.threads;
    cfg.domain.threads = *f.threads;
  }
  if (f.setup) cfg.train.setup = ParseSetup(*f.setup);
  if (f.epochs) cfg.train.epochs = *f.epochs;
  if (f.sets) cfg.sets = SplitList(*f.sets);
  if (f.fa) cfg.fa = ParseDoubleList(*f.fa);
  cfg.Validate();
  return cfg;
}

fs::path RequiredPath(const RunConfig& cfg, const fs::path& p, const std::string& key) {
  if (p.empty()) Fail(ErrorCode::kMissingSource, "config key '" + key + "' is not set");
  fs::path resolved = cfg.Resolve(p);
  if (!fs::exists(resolved))
    Fail(ErrorCode::kMissingSource, key + " not found: " + resolved.string());
  return resolved;
}

fs::path OutDir(const Flags& f, const RunConfig& cfg, const std::string& sub) {
  if (!f.out.empty()) return f.out;
  return cfg.Resolve(cfg.work_dir) / sub;
}

// Loaded training inputs. TrainingData borrows the others, so the bundle
// stays in place.
struct TrainWorkspace {
  Manifest real;
  std::optional<Manifest> synthetic;
  std::vector<SubwordSegment> alignments;
  std::unique_ptr<FileAudioStore> store;
  std::optional<SubwordInventory> inventory;
  std::unique_ptr<TrainingData> data;
};

std::unique_ptr<TrainWorkspace> LoadWorkspace(const RunConfig& cfg, bool want_synthetic,
                                              bool want_inventory, bool optional_extras) {
  auto ws = std::make_unique<TrainWorkspace>();
  ws->real = ReadManifest(RequiredPath(cfg, cfg.train_manifest, "train_manifest"));
  auto present = [&](const fs::path& p) {
    return !p.empty() && fs::exists(cfg.Resolve(p));
  };
  if (want_synthetic && (!optional_extras || present(cfg.synthetic_manifest)))
    ws->synthetic = ReadManifest(RequiredPath(cfg, cfg.synthetic_manifest, "synthetic_manifest"));
  const bool have_alignments = present(cfg.train_alignments);
  if (have_alignments || (want_inventory && !optional_extras))
    ws->alignments = ReadAlignmentTsv(RequiredPath(cfg, cfg.train_alignments, "train_alignments"));
  if (want_inventory && have_alignments) {
    ws->store = std::make_unique<FileAudioStore>(ws->real.root);
    for (const auto& e : ws->real.entries) ws->store->Register(e.utt_id, e.path);
    ws->inventory = BuildInventory(ws->alignments, *ws->store);
  }
  DataSources src;
  src.real = &ws->real;
  src.synthetic = ws->synthetic ? &*ws->synthetic : nullptr;
  src.alignments = ws->alignments.empty() ? nullptr : &ws->alignments;
  src.inventory = ws->inventory ? &*ws->inventory : nullptr;
  ws->data = std::make_unique<TrainingData>(cfg.dataset, src);
  return ws;
}

std::string ModelFileStem(TrainSetup setup, std::uint64_t seed) {
  return std::string(SetupName(setup)) + ".seed" + std::to_string(seed);
}

// ---- synth-corpus

int CmdSynthCorpus(const Flags& f, std::ostream& out) {
  ToyCorpusOptions o;
  o.seed = f.seed.value_or(0);
  if (!(f.scale > 0.0)) Fail(ErrorCode::kInvalidConfig, "--scale must be positive");
  o.scale = f.scale;
  if (f.test_scale < 0.0) Fail(ErrorCode::kInvalidConfig, "--test-scale must be >= 0");
  o.test_scale = f.test_scale;
  const fs::path dir = f.out.empty() ? fs::path("toy") : fs::path(f.out);
  const ToyCorpusSummary s = WriteToyCorpus(dir, o);
  out << "train: " << s.train_positive << " positive, " << s.train_negative << " negative\n"
      << "test: " << s.test_positive << " positive, " << s.test_negative << " negative, "
      << s.test_confusion << " confusion\n"
      << "synthetic: " << s.synthetic_positive << " wake, " << s.synthetic_confusion
      << " confusion, " << s.synthetic_negative << " negative\n"
      << "config: " << s.config_path.string() << "\n";
  return 0;
}

// ---- featurize

int CmdFeaturize(const Flags& f, std::ostream& out) {
  const RunConfig cfg = ResolveConfig(f);
  struct Job {
    std::string name;
    Manifest manifest;
  };
  std::vector<Job> jobs;
  jobs.push_back({"train", ReadManifest(RequiredPath(cfg, cfg.train_manifest, "train_manifest"))});
  const std::pair<const char*, const fs::path*> extras[] = {
      {"synthetic", &cfg.synthetic_manifest},
      {"test_real", &cfg.test_real_manifest},
      {"test_cw", &cfg.test_cw_manifest}};
  for (const auto& [name, path] : extras)
    if (!path->empty())
      jobs.push_back({name, ReadManifest(RequiredPath(cfg, *path, std::string(name) + "_manifest"))});

  const LogMelExtractor extractor(cfg.dataset.feature_spec, cfg.dataset.sample_rate_hz);
  std::vector<std::vector<CachedFeatures>> results(jobs.size());
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const auto& entries = jobs[j].manifest.entries;
    results[j].resize(entries.size());
    ParallelFor(entries.size(), cfg.train.threads, [&](std::size_t i) {
      results[j][i].utt_id = entries[i].utt_id;
      results[j][i].features =
          Cmvn(extractor.Compute(ReadWav(jobs[j].manifest.Resolve(entries[i]))));
    });
  }
  const fs::path dir = OutDir(f, cfg, "features");
  fs::create_directories(dir);
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const fs::path p = dir / (jobs[j].name + ".feats");
    WriteFeatureCache(p, results[j]);
    out << jobs[j].name << ": " << results[j].size() << " utterances -> " << p.string() << "\n";
  }
  return 0;
}

// ---- train

SourceCounts CountsFromManifests(const RunConfig& cfg, TrainSetup setup) {
  SourceCounts c;
  const Manifest real = ReadManifest(RequiredPath(cfg, cfg.train_manifest, "train_manifest"));
  c.real_positive = real.Count(Label::kPositive);
  c.real_negative = real.Count(Label::kNegative);
  if (SetupUsesSynthetic(setup) && !cfg.synthetic_manifest.empty() &&
      fs::exists(cfg.Resolve(cfg.synthetic_manifest))) {
    const Manifest syn = ReadManifest(cfg.Resolve(cfg.synthetic_manifest));
    c.synthetic_positive = syn.Count(Label::kPositive);
    c.synthetic_negative = syn.Count(Label::kNegative);
  }
  c.has_inventory = !cfg.train_alignments.empty() && fs::exists(cfg.Resolve(cfg.train_alignments));
  return c;
}

int CmdTrainDryRun(const Flags& f, const RunConfig& cfg, std::ostream& out) {
  std::vector<TrainSetup> setups;
  if (f.setup) {
    setups.push_back(cfg.train.setup);
  } else {
    setups.assign(kAllSetups.begin(), kAllSetups.end());
  }
  out << "epochs=" << cfg.train.epochs << " batch=" << cfg.train.batch
      << " seed=" << cfg.train.seed << "\n";
  for (TrainSetup s : setups) {
    const SourceCounts counts = CountsFromManifests(cfg, s);
    const EpochPlan plan = ComposeEpoch(s, counts, cfg.train.seed, 0);
    const std::size_t steps = (plan.tally.total() + cfg.train.batch - 1) / cfg.train.batch;
    out << "setup=" << SetupName(s) << " " << plan.tally.ToString()
        << " total=" << plan.tally.total() << " positives=" << plan.tally.positives()
        << " negatives=" << plan.tally.negatives() << " steps_per_epoch=" << steps << "\n";
  }
  return 0;
}

int CmdTrain(const Flags& f, std::ostream& out) {
  const RunConfig cfg = ResolveConfig(f);
  if (f.dry_run) return CmdTrainDryRun(f, cfg, out);
  const TrainSetup setup = cfg.train.setup;
  std::optional<LoadedDomainClassifier> domain;
  if (SetupUsesEmbedding(setup)) {
    const fs::path p = cfg.DomainCheckpoint();
    if (!fs::exists(p))
      Fail(ErrorCode::kMissingSource, "domain classifier checkpoint not found: " + p.string());
    domain = LoadDomainClassifier(p.string());
  }
  auto ws = LoadWorkspace(cfg, SetupUsesSynthetic(setup), SetupUsesConcat(setup), false);
  if (SetupUsesSynthetic(setup) && !ws->synthetic)
    Fail(ErrorCode::kMissingSource, "setup " + std::string(SetupName(setup)) +
                                        " needs synthetic_manifest");

  KwsTrainResult r = TrainKws(cfg.train, *ws->data, domain ? &domain->model : nullptr,
                              [&](const EpochLog& e, const SourceTally&) {
                                char buf[128];
                                std::snprintf(buf, sizeof buf, "epoch %d loss %.6f lr %.6g\n",
                                              e.epoch, e.loss, e.lr);
                                out << buf << std::flush;
                              });
  const fs::path dir = OutDir(f, cfg, "models");
  const std::string stem = ModelFileStem(setup, cfg.train.seed);
  SaveKwsModel((dir / (stem + ".ckpt")).string(), r.model, r.meta);
  WriteTrainLogCsv((dir / (stem + ".loss.csv")).string(), r.meta.train_log);
  out << "checkpoint: " << (dir / (stem + ".ckpt")).string() << "\n";
  return 0;
}

// ---- train-domain

int CmdTrainDomain(const Flags& f, std::ostream& out) {
  const RunConfig cfg = ResolveConfig(f);
  auto ws = LoadWorkspace(cfg, true, true, true);
  const auto corpus = BuildDomainCorpus(*ws->data, cfg.domain_per_domain, cfg.domain.seed);
  DomainTrainResult r = TrainDomainClassifier(
      corpus, cfg.domain, cfg.dataset.feature_spec, [&](const EpochLog& e, const SourceTally&) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "epoch %d loss %.6f lr %.6g\n", e.epoch, e.loss, e.lr);
        out << buf << std::flush;
      });
  const fs::path ckpt = f.out.empty() ? cfg.DomainCheckpoint() : fs::path(f.out) / "domain.ckpt";
  SaveDomainClassifier(ckpt.string(), r.model, r.meta);
  fs::path log = ckpt;
  log.replace_extension(".loss.csv");
  WriteTrainLogCsv(log.string(), r.meta.train_log);
  char buf[160];
  std::snprintf(buf, sizeof buf, "train=%zu heldout=%zu heldout_accuracy=%.4f\n", r.n_train,
                r.n_heldout, r.heldout_accuracy);
  out << buf << "checkpoint: " << ckpt.string() << "\n";
  return 0;
}

// ---- detect / eval / det

struct ModelBundle {
  std::string name;
  LoadedKwsModel kws;
  std::optional<LoadedDomainClassifier> domain;
};

ModelBundle LoadModelBundle(const RunConfig& cfg, const std::string& path) {
  if (!fs::exists(path)) Fail(ErrorCode::kMissingSource, "model not found: " + path);
  ModelBundle b{fs::path(path).stem().string(), LoadKwsModel(path), std::nullopt};
  if (std::holds_alternative<EmbKwsCnn>(b.kws.model)) {
    const fs::path p = cfg.DomainCheckpoint();
    if (!fs::exists(p))
      Fail(ErrorCode::kMissingSource, "domain classifier checkpoint not found: " + p.string());
    b.domain = LoadDomainClassifier(p.string());
  }
  return b;
}

std::vector<std::string> RequireModels(const Flags& f) {
  if (f.models.empty()) Fail(ErrorCode::kInvalidConfig, "--model is required");
  return f.models;
}

// Scores of the two test manifests for one model; cw only when needed.
struct TestScores {
  std::vector<ScoredUtterance> real;
  std::vector<ScoredUtterance> cw;
};

bool NeedsCw(const std::vector<std::string>& sets) {
  return std::find(sets.begin(), sets.end(), "real+cw") != sets.end();
}

struct TestManifests {
  Manifest real;
  std::optional<Manifest> cw;
};

TestManifests LoadTestManifests(const RunConfig& cfg) {
  TestManifests t;
  t.real = ReadManifest(RequiredPath(cfg, cfg.test_real_manifest, "test_real_manifest"));
  if (NeedsCw(cfg.sets))
    t.cw = ReadManifest(RequiredPath(cfg, cfg.test_cw_manifest, "test_cw_manifest"));
  return t;
}

TestScores ScoreTests(const RunConfig& cfg, const TestManifests& t, const ModelBundle& b) {
  const DomainClassifier* dom = b.domain ? &b.domain->model : nullptr;
  const FrameSpec& spec = b.kws.meta.feature_spec;
  TestScores s;
  s.real = ScoreManifest(t.real, b.kws.model, dom, spec, cfg.dataset.sample_rate_hz,
                         cfg.detection.stride, cfg.train.threads);
  if (t.cw)
    s.cw = ScoreManifest(*t.cw, b.kws.model, dom, spec, cfg.dataset.sample_rate_hz,
                         cfg.detection.stride, cfg.train.threads);
  return s;
}

std::vector<const ScoredUtterance*> SetMembers(const TestScores& s, const std::string& set) {
  std::vector<const ScoredUtterance*> out;
  for (const auto& u : s.real) out.push_back(&u);
  if (set == "real+cw")
    for (const auto& u : s.cw) out.push_back(&u);
  return out;
}

ScoredCorpus SetCorpus(const TestScores& s, const std::string& set) {
  ScoredCorpus c = ToScoredCorpus(s.real);
  if (set == "real+cw") c = MergeCorpora(c, ToScoredCorpus(s.cw));
  return c;
}

int CmdDetect(const Flags& f, std::ostream& out) {
  const RunConfig cfg = ResolveConfig(f);
  const auto paths = RequireModels(f);
  const TestManifests tests = LoadTestManifests(cfg);
  std::vector<ModelBundle> models;
  for (const auto& p : paths) models.push_back(LoadModelBundle(cfg, p));
  const fs::path dir = OutDir(f, cfg, "eval");
  for (const auto& b : models) {
    const TestScores scores = ScoreTests(cfg, tests, b);
    for (const auto& set : cfg.sets) {
      std::vector<Trigger> triggers;
      for (const auto* u : SetMembers(scores, set))
        for (std::size_t origin : Detect(u->trace, cfg.detection))
          triggers.push_back({u->entry.utt_id, origin,
                              u->trace.values[origin / u->trace.stride]});
      const fs::path p = dir / (b.name + "." + set + ".triggers.csv");
      WriteStringToFile(p, TriggerCsv(triggers, b.kws.meta.feature_spec.shift_ms));
      out << b.name << " " << set << ": " << triggers.size() << " triggers -> " << p.string()
          << "\n";
    }
  }
  return 0;
}

int CmdEval(const Flags& f, std::ostream& out, bool write_det) {
  const RunConfig cfg = ResolveConfig(f);
  const auto paths = RequireModels(f);
  const TestManifests tests = LoadTestManifests(cfg);
  std::vector<ModelBundle> models;
  for (const auto& p : paths) models.push_back(LoadModelBundle(cfg, p));
  const fs::path dir = OutDir(f, cfg, "eval");
  for (const auto& b : models) {
    const TestScores scores = ScoreTests(cfg, tests, b);
    std::string report;
    for (const auto& set : cfg.sets) {
      const DetCurve curve = ComputeDetCurve(SetCorpus(scores, set), cfg.detection.lockout);
      if (write_det) {
        const fs::path p = dir / (b.name + "." + set + ".det.csv");
        WriteStringToFile(p, DetCsv(curve));
        out << b.name << " " << set << ": " << curve.size() << " points -> " << p.string()
            << "\n";
        continue;
      }
      for (double target : cfg.fa) {
        const std::string line = ReportLine(b.name, set, target, FrAtFa(curve, target));
        report += line + "\n";
        out << line << "\n";
      }
    }
    if (!write_det) WriteStringToFile(dir / (b.name + ".report.jsonl"), report);
  }
  return 0;
}

void AddConfigFlags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "run configuration file");
  app->add_option("--param", f.params, "override one config key, KEY=VALUE");
  app->add_option("--seed", f.seed, "random seed");
  app->add_option("--threads", f.threads, "worker threads");
  app->add_option("--out", f.out, "output directory");
}

}  // namespace

std::vector<ScoredUtterance> ScoreManifest(const Manifest& manifest, const KwsModel& model,
                                           const DomainClassifier* domain,
                                           const FrameSpec& spec, int sample_rate_hz,
                                           std::size_t stride, int threads) {
  const LogMelExtractor extractor(spec, sample_rate_hz);
  std::vector<ScoredUtterance> out(manifest.entries.size());
  ParallelFor(out.size(), threads, [&](std::size_t i) {
    const ManifestEntry& e = manifest.entries[i];
    const Waveform w = ReadWav(manifest.Resolve(e));
    out[i].entry = e;
    out[i].duration_s = static_cast<double>(w.samples.size()) / w.sample_rate_hz;
    out[i].trace = ScoreStream(Cmvn(extractor.Compute(w)), model, domain, stride);
  });
  return out;
}

ScoredCorpus ToScoredCorpus(const std::vector<ScoredUtterance>& scored) {
  ScoredCorpus c;
  for (const auto& u : scored) {
    if (u.entry.label == Label::kPositive) {
      if (u.trace.values.empty())
        Fail(ErrorCode::kEmptyTrace, "positive " + u.entry.utt_id + " is shorter than one window");
      c.positives.push_back({u.entry.utt_id, Confidence(u.trace)});
    } else {
      c.negatives.push_back({u.entry.utt_id, u.trace, u.duration_s});
    }
  }
  c.UpdateHours();
  return c;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cwkws: keyword spotting with adversarial training samples", "cwkws"};
  app.require_subcommand(1);
  Flags f;

  auto* synth = app.add_subcommand("synth-corpus", "write the toy corpus");
  synth->add_option("--out", f.out, "output directory (default: toy)");
  synth->add_option("--seed", f.seed, "random seed");
  synth->add_option("--scale", f.scale, "multiplier for every utterance count");
  synth->add_option("--test-scale", f.test_scale, "separate multiplier for the test sets");

  auto* featurize = app.add_subcommand("featurize", "write CMVN log-mel feature caches");
  AddConfigFlags(featurize, f);

  auto* train = app.add_subcommand("train", "train a keyword model");
  AddConfigFlags(train, f);
  train->add_option("--setup", f.setup, "baseline, real+concat, real+syn, real+mask, real+all, real+all+emb");
  train->add_option("--epochs", f.epochs, "epoch count");
  train->add_flag("--dry-run", f.dry_run, "print the per-source sample plan and exit");

  auto* train_domain = app.add_subcommand("train-domain", "train the LSTM domain classifier");
  AddConfigFlags(train_domain, f);

  CLI::App* scoring[3] = {
      app.add_subcommand("detect", "dump triggers on the test sets"),
      app.add_subcommand("eval", "FR at fixed FA/h operating points"),
      app.add_subcommand("det", "write DET curves"),
  };
  for (auto* sc : scoring) {
    AddConfigFlags(sc, f);
    sc->add_option("--model", f.models, "keyword model checkpoint(s)");
    sc->add_option("--sets", f.sets, "test sets: real, real+cw");
  }
  scoring[1]->add_option("--fa", f.fa, "FA/h targets, comma separated");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "ERROR " << ErrorCodeName(ErrorCode::kInvalidConfig) << ": " << e.what() << "\n";
    return 1;
  }

  try {
    if (*synth) return CmdSynthCorpus(f, out);
    if (*featurize) return CmdFeaturize(f, out);
    if (*train) return CmdTrain(f, out);
    if (*train_domain) return CmdTrainDomain(f, out);
    if (*scoring[0]) return CmdDetect(f, out);
    if (*scoring[1]) return CmdEval(f, out, false);
    if (*scoring[2]) return CmdEval(f, out, true);
  } catch (const KwsError& e) {
    err << "ERROR " << ErrorCodeName(e.code()) << ": " << e.what() << "\n";
    return IsValidationError(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    err << "ERROR " << ErrorCodeName(ErrorCode::kIoError) << ": " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace cwkws
