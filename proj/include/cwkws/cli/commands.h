// include/cwkws/cli/commands.h

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

#ifndef CWKWS_CLI_COMMANDS_H_
#define CWKWS_CLI_COMMANDS_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "cwkws/eval/metrics.h"
#include "cwkws/models/domain_classifier.h"
#include "cwkws/models/kws_cnn.h"
#include "cwkws/pipeline/manifest.h"

namespace cwkws {

/// Runs one command line (without the program name) and returns the exit
/// status: 0 on success, 1 on a validation error, 2 on a runtime error.
/// Errors go to `err` as "ERROR <code>: <message>".
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct ScoredUtterance {
  ManifestEntry entry;
  PosteriorTrace trace;
  double duration_s = 0.0;
};

/// Features each listed utterance with the given front end and scores every
/// window. Utterances are split across `threads` workers; the output keeps
/// manifest order.
std::vector<ScoredUtterance> ScoreManifest(const Manifest& manifest, const KwsModel& model,
                                           const DomainClassifier* domain,
                                           const FrameSpec& spec, int sample_rate_hz,
                                           std::size_t stride, int threads);

/// Positives keep their window maximum; negatives keep the full trace.
ScoredCorpus ToScoredCorpus(const std::vector<ScoredUtterance>& scored);

}  // namespace cwkws

#endif  // CWKWS_CLI_COMMANDS_H_
