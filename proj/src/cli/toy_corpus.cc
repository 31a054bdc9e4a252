// src/cli/toy_corpus.cc

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

#include "cwkws/cli/toy_corpus.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "cwkws/augment/adversarial.h"
#include "cwkws/common/error.h"
#include "cwkws/common/file_io.h"
#include "cwkws/pipeline/manifest.h"

namespace cwkws {
namespace {

constexpr int kToyRate = 16000;
// One full window after the keyword start: 120 shifts plus one frame.
constexpr double kWindowSpanS = 1.56;

enum SetCode : std::uint64_t {
  kTrainPos = 1,
  kTrainNeg,
  kTestPos,
  kTestNeg,
  kTestCw,
  kSynPos,
  kSynCw,
  kSynNeg,
};

std::size_t Scaled(std::size_t n, double scale) {
  if (n == 0) return 0;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(n * scale)));
}

const ToySubword& Lookup(const std::string& name) {
  for (const auto& s : ToyLexicon())
    if (s.name == name) return s;
  Fail(ErrorCode::kUnknownSubword, "toy lexicon has no subword '" + name + "'");
}

std::vector<std::string> Fillers() {
  std::vector<std::string> out;
  const std::set<std::string> kw(kToyKeyword.begin(), kToyKeyword.end());
  for (const auto& s : ToyLexicon())
    if (!kw.count(s.name)) out.push_back(s.name);
  return out;
}

// Quadratic pitch contour through (0, a), (0.5, b), (1, c).
double Contour(double a, double b, double c, double t) {
  return a * (1 - t) * (1 - 2 * t) + 4 * b * t * (1 - t) + c * t * (2 * t - 1);
}

void AddChirp(std::vector<double>& out, std::size_t start, std::size_t length,
              const ToySubword& sw, const ToySpeaker& spk, double pitch_jitter, Rng& rng) {
  const double attack = 0.02 * kToyRate, release = 0.03 * kToyRate;
  const int harmonics = spk.voice == ToyVoice::kSynthetic ? 3 : 4;
  const double vibrato_hz = 5.0 + rng.Uniform(-0.5, 0.5);
  double phase = rng.Uniform(0.0, 2.0 * std::numbers::pi);
  double norm = 0.0;
  for (int k = 0; k < harmonics; ++k) norm += std::pow(spk.tilt, k);
  for (std::size_t i = 0; i < length; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(length);
    double f = spk.base_hz * pitch_jitter * Contour(sw.f_start, sw.f_mid, sw.f_end, t);
    if (spk.voice == ToyVoice::kSynthetic)
      f *= 1.0 + 0.015 * std::sin(2.0 * std::numbers::pi * vibrato_hz * i / kToyRate);
    phase += 2.0 * std::numbers::pi * f / kToyRate;
    double env = 1.0 - 0.3 * t;
    const double di = static_cast<double>(i), dr = static_cast<double>(length - 1 - i);
    if (di < attack) env *= 0.5 - 0.5 * std::cos(std::numbers::pi * di / attack);
    if (dr < release) env *= 0.5 - 0.5 * std::cos(std::numbers::pi * dr / release);
    double v = 0.0;
    for (int k = 0; k < harmonics; ++k) v += std::pow(spk.tilt, k) * std::sin((k + 1) * phase);
    out[start + i] += spk.amplitude * env * v / norm;
  }
}

std::string RelWavPath(const std::string& utt_id) { return "wav/" + utt_id + ".wav"; }

std::string Join(const std::vector<std::string>& words) {
  std::string s;
  for (const auto& w : words) s += (s.empty() ? "" : " ") + w;
  return s;
}

}  // namespace

const std::vector<ToySubword>& ToyLexicon() {
  static const std::vector<ToySubword> lex = {
      {"ni", 1.00, 1.25, 1.60, 0.26},  {"hao", 1.40, 0.95, 1.35, 0.32},
      {"mi", 2.00, 2.05, 2.00, 0.24},  {"ya", 1.90, 1.50, 1.10, 0.30},
      {"ba", 0.90, 0.92, 0.95, 0.26},  {"du", 1.30, 1.10, 0.85, 0.28},
      {"ke", 1.70, 2.00, 2.30, 0.22},  {"lo", 1.35, 1.40, 1.38, 0.30},
      {"su", 2.20, 1.90, 2.10, 0.26},  {"te", 1.10, 1.50, 1.10, 0.24},
      {"wu", 0.75, 0.78, 0.80, 0.32},  {"zi", 1.20, 1.60, 1.90, 0.26},
  };
  return lex;
}

ToySpeaker MakeToySpeaker(Rng& rng, ToyVoice voice) {
  ToySpeaker s;
  s.voice = voice;
  s.base_hz = rng.Uniform(150.0, 280.0);
  s.rate = rng.Uniform(0.85, 1.15);
  s.amplitude = rng.Uniform(0.15, 0.40);
  if (voice == ToyVoice::kSynthetic) {
    s.tilt = rng.Uniform(0.20, 0.30);
    s.rate = rng.Uniform(0.95, 1.05);
    s.noise_sigma = 0.0003;
  } else {
    s.tilt = rng.Uniform(0.40, 0.70);
    s.noise_sigma = rng.Uniform(0.002, 0.006);
  }
  return s;
}

ToyUtterance RenderToyUtterance(const std::vector<std::string>& subwords,
                                const ToySpeaker& speaker, double lead_s, double min_total_s,
                                Rng& rng, const std::string& utt_id) {
  struct Placed {
    const ToySubword* sw;
    std::size_t start, length;
    double pitch;
  };
  std::vector<Placed> placed;
  std::size_t cursor = static_cast<std::size_t>(std::llround(lead_s * kToyRate));
  for (std::size_t k = 0; k < subwords.size(); ++k) {
    const ToySubword& sw = Lookup(subwords[k]);
    const double dur = sw.duration_s * speaker.rate * rng.Uniform(0.9, 1.1);
    const auto len = static_cast<std::size_t>(std::llround(dur * kToyRate));
    placed.push_back({&sw, cursor, len, rng.Uniform(0.97, 1.03)});
    cursor += len;
    if (k + 1 < subwords.size())
      cursor += static_cast<std::size_t>(std::llround(rng.Uniform(0.02, 0.07) * kToyRate));
  }
  cursor += static_cast<std::size_t>(std::llround(rng.Uniform(0.10, 0.30) * kToyRate));
  const auto min_total = static_cast<std::size_t>(std::ceil(min_total_s * kToyRate));
  const std::size_t total = std::max(cursor, min_total);

  ToyUtterance u;
  u.wave.sample_rate_hz = kToyRate;
  u.wave.samples.assign(total, 0.0);
  for (const auto& p : placed) {
    AddChirp(u.wave.samples, p.start, p.length, *p.sw, speaker, p.pitch, rng);
    u.segments.push_back({utt_id, p.sw->name, p.start * 1000.0 / kToyRate,
                          (p.start + p.length) * 1000.0 / kToyRate});
  }
  for (double& v : u.wave.samples) v = std::clamp(v + speaker.noise_sigma * rng.Normal(), -1.0, 1.0);
  return u;
}

ToyCorpusSummary WriteToyCorpus(const std::filesystem::path& out_dir,
                                const ToyCorpusOptions& o) {
  namespace fs = std::filesystem;
  std::error_code ec;
  for (const char* sub : {"train/wav", "test/wav", "synthetic/wav"}) {
    fs::create_directories(out_dir / sub, ec);
    if (ec) Fail(ErrorCode::kIoError, "cannot create " + (out_dir / sub).string() + ": " + ec.message());
  }

  auto speakers = [&](std::size_t n, std::uint64_t pool, ToyVoice voice) {
    std::vector<ToySpeaker> out;
    for (std::size_t k = 0; k < n; ++k) {
      Rng r = Rng::Derive(o.seed, {0x5350ULL, pool, k});
      out.push_back(MakeToySpeaker(r, voice));
    }
    return out;
  };
  const auto train_spk = speakers(std::max<std::size_t>(o.train_speakers, 1), 1, ToyVoice::kRecorded);
  const auto test_spk = speakers(std::max<std::size_t>(o.test_speakers, 1), 2, ToyVoice::kRecorded);
  const auto syn_spk = speakers(std::max<std::size_t>(o.synthetic_speakers, 1), 3, ToyVoice::kSynthetic);

  const auto recipes = ConfusionRecipes(kToyKeyword);
  const auto fillers = Fillers();

  auto negative_words = [&](Rng& rng) {
    const std::size_t n = 3 + rng.UniformIndex(4);
    std::vector<std::string> w;
    for (std::size_t k = 0; k < n; ++k) w.push_back(fillers[rng.UniformIndex(fillers.size())]);
    if (rng.Uniform01() < 0.2) w[rng.UniformIndex(n)] = kToyKeyword[rng.UniformIndex(kToyKeyword.size())];
    return w;
  };

  struct Made {
    ManifestEntry entry;
    std::vector<SubwordSegment> segments;
  };
  // kind: 0 keyword, 1 confusion recipe, 2 negative babble.
  auto make = [&](const fs::path& dir, const std::string& prefix, SetCode code, std::size_t i,
                  int kind, const std::vector<ToySpeaker>& pool, Domain domain) {
    Rng rng = Rng::Derive(o.seed, {static_cast<std::uint64_t>(code), i});
    const ToySpeaker& spk = pool[rng.UniformIndex(pool.size())];
    std::vector<std::string> words;
    double lead = 0.0, min_total = 0.0;
    if (kind == 0) {
      words = kToyKeyword;
      lead = code == kTestPos ? rng.Uniform(0.10, 0.60) : rng.Uniform(0.15, 0.35);
      min_total = lead + kWindowSpanS;
    } else if (kind == 1) {
      words = recipes[i % recipes.size()].subwords;
      lead = rng.Uniform(0.10, 0.50);
      min_total = lead + kWindowSpanS;
    } else {
      words = negative_words(rng);
      lead = rng.Uniform(0.10, 0.40);
      min_total = 1.70;
    }
    char id[64];
    std::snprintf(id, sizeof id, "%s%05zu", prefix.c_str(), i + 1);
    ToyUtterance u = RenderToyUtterance(words, spk, lead, min_total, rng, id);
    WriteWav(dir / RelWavPath(id), u.wave);
    Made m;
    m.entry.utt_id = id;
    m.entry.path = RelWavPath(id);
    m.entry.label = kind == 0 ? Label::kPositive : Label::kNegative;
    m.entry.domain = domain;
    m.entry.text = Join(words);
    if (kind != 2) m.entry.keyword_start_ms = u.segments.front().start_ms;
    m.segments = std::move(u.segments);
    return m;
  };

  ToyCorpusSummary summary;
  const fs::path train_dir = out_dir / "train", test_dir = out_dir / "test",
                 syn_dir = out_dir / "synthetic";

  std::vector<ManifestEntry> train;
  std::vector<SubwordSegment> alignments;
  summary.train_positive = Scaled(o.train_positive, o.scale);
  summary.train_negative = Scaled(o.train_negative, o.scale);
  for (std::size_t i = 0; i < summary.train_positive; ++i) {
    Made m = make(train_dir, "train-p", kTrainPos, i, 0, train_spk, Domain::kReal);
    alignments.insert(alignments.end(), m.segments.begin(), m.segments.end());
    train.push_back(std::move(m.entry));
  }
  for (std::size_t i = 0; i < summary.train_negative; ++i)
    train.push_back(make(train_dir, "train-n", kTrainNeg, i, 2, train_spk, Domain::kReal).entry);
  WriteManifest(train_dir / "manifest.jsonl", train);
  WriteAlignmentTsv(train_dir / "alignments.tsv", alignments);

  std::vector<ManifestEntry> test_real, test_cw;
  const double test_scale = o.test_scale > 0.0 ? o.test_scale : o.scale;
  summary.test_positive = Scaled(o.test_positive, test_scale);
  summary.test_negative = Scaled(o.test_negative, test_scale);
  summary.test_confusion = Scaled(o.test_confusion, test_scale);
  for (std::size_t i = 0; i < summary.test_positive; ++i)
    test_real.push_back(make(test_dir, "test-p", kTestPos, i, 0, test_spk, Domain::kReal).entry);
  for (std::size_t i = 0; i < summary.test_negative; ++i)
    test_real.push_back(make(test_dir, "test-n", kTestNeg, i, 2, test_spk, Domain::kReal).entry);
  for (std::size_t i = 0; i < summary.test_confusion; ++i)
    test_cw.push_back(make(test_dir, "test-cw", kTestCw, i, 1, test_spk, Domain::kReal).entry);
  WriteManifest(test_dir / "real.jsonl", test_real);
  WriteManifest(test_dir / "cw.jsonl", test_cw);

  std::vector<ManifestEntry> syn;
  summary.synthetic_positive = Scaled(o.synthetic_positive, o.scale);
  summary.synthetic_confusion = Scaled(o.synthetic_confusion, o.scale);
  summary.synthetic_negative = Scaled(o.synthetic_negative, o.scale);
  for (std::size_t i = 0; i < summary.synthetic_positive; ++i)
    syn.push_back(make(syn_dir, "syn-p", kSynPos, i, 0, syn_spk, Domain::kSynthetic).entry);
  for (std::size_t i = 0; i < summary.synthetic_confusion; ++i)
    syn.push_back(make(syn_dir, "syn-cw", kSynCw, i, 1, syn_spk, Domain::kSynthetic).entry);
  for (std::size_t i = 0; i < summary.synthetic_negative; ++i)
    syn.push_back(make(syn_dir, "syn-n", kSynNeg, i, 2, syn_spk, Domain::kSynthetic).entry);
  WriteManifest(syn_dir / "manifest.jsonl", syn);

  summary.config_path = out_dir / "cwkws.conf";
  std::string conf =
      "# Toy corpus generated by cwkws synth-corpus\n"
      "keyword = ni,hao,mi,ya\n"
      "train_manifest = train/manifest.jsonl\n"
      "train_alignments = train/alignments.tsv\n"
      "synthetic_manifest = synthetic/manifest.jsonl\n"
      "test_real_manifest = test/real.jsonl\n"
      "test_cw_manifest = test/cw.jsonl\n"
      "work_dir = work\n"
      "seed = " + std::to_string(o.seed) + "\n";
  WriteStringToFile(summary.config_path, conf);
  return summary;
}

}  // namespace cwkws
