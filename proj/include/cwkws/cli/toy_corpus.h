// include/cwkws/cli/toy_corpus.h

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

#ifndef CWKWS_CLI_TOY_CORPUS_H_
#define CWKWS_CLI_TOY_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cwkws/audio/wav.h"
#include "cwkws/augment/inventory.h"
#include "cwkws/common/rng.h"

namespace cwkws {

// A self-contained stand-in corpus. "Speech" is a sequence of tonal chirps,
// one per subword; each subword has its own pitch contour and speakers vary
// pitch, rate, loudness and harmonic tilt. The keyword is four particular
// subwords in order. Confusers are fragments, deletions and repetitions of
// it, rendered as natural utterances.
struct ToyCorpusOptions {
  std::uint64_t seed = 0;
  double scale = 1.0;  // multiplies every count below
  double test_scale = 0.0;  // test-set multiplier; 0 means `scale`
  std::size_t train_positive = 200;
  std::size_t train_negative = 1000;
  std::size_t test_positive = 60;
  std::size_t test_negative = 200;
  std::size_t test_confusion = 160;
  std::size_t synthetic_positive = 60;
  std::size_t synthetic_confusion = 160;
  std::size_t synthetic_negative = 160;
  std::size_t train_speakers = 40;
  std::size_t test_speakers = 16;
  std::size_t synthetic_speakers = 24;
};

inline const std::vector<std::string> kToyKeyword = {"ni", "hao", "mi", "ya"};

/// Chirp shape of one subword, in multiples of the speaker's base pitch.
struct ToySubword {
  std::string name;
  double f_start = 1.0;
  double f_mid = 1.0;
  double f_end = 1.0;
  double duration_s = 0.28;
};

const std::vector<ToySubword>& ToyLexicon();

enum class ToyVoice { kRecorded, kSynthetic };

struct ToySpeaker {
  double base_hz = 200.0;
  double rate = 1.0;       // duration multiplier
  double amplitude = 0.3;
  double tilt = 0.55;      // per-harmonic amplitude ratio
  double noise_sigma = 0.003;
  ToyVoice voice = ToyVoice::kRecorded;
};

ToySpeaker MakeToySpeaker(Rng& rng, ToyVoice voice);

struct ToyUtterance {
  Waveform wave;
  std::vector<SubwordSegment> segments;  // one per rendered subword, ms
};

/// Renders subwords with natural gaps after `lead_s` of background, then
/// pads the end so the utterance lasts at least `min_total_s`.
ToyUtterance RenderToyUtterance(const std::vector<std::string>& subwords,
                                const ToySpeaker& speaker, double lead_s, double min_total_s,
                                Rng& rng, const std::string& utt_id = "");

struct ToyCorpusSummary {
  std::filesystem::path config_path;
  std::size_t train_positive = 0, train_negative = 0;
  std::size_t test_positive = 0, test_negative = 0, test_confusion = 0;
  std::size_t synthetic_positive = 0, synthetic_confusion = 0, synthetic_negative = 0;
};

/// Writes train/, test/ and synthetic/ trees with WAVs, manifests and the
/// train alignment table, plus cwkws.conf pointing at them.
ToyCorpusSummary WriteToyCorpus(const std::filesystem::path& out_dir,
                                const ToyCorpusOptions& options);

}  // namespace cwkws

#endif  // CWKWS_CLI_TOY_CORPUS_H_
