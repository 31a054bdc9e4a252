// include/cwkws/models/checkpoint.h

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

#ifndef CWKWS_MODELS_CHECKPOINT_H_
#define CWKWS_MODELS_CHECKPOINT_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cwkws/features/log_mel.h"
#include "cwkws/models/domain_classifier.h"
#include "cwkws/models/kws_cnn.h"

namespace cwkws {

struct EpochLog {
  int epoch = 0;
  double loss = 0.0;
  double lr = 0.0;
};

/// Everything in a checkpoint besides the weights.
struct CheckpointMeta {
  std::string setup;  // training setup name, or "domain" for the classifier
  std::uint64_t seed = 0;
  FrameSpec feature_spec;
  std::vector<Domain> domains;
  std::vector<EpochLog> train_log;
};

// File layout:
//   line 1: "CWKWS-CKPT 1"
//   line 2: one JSON object (format_version, architecture, config, params
//           [{name, shape}], domains, feature_spec, seed, setup, train_log)
//   rest:   parameter values, little-endian float64, in declaration order.
inline constexpr const char* kCheckpointMagic = "CWKWS-CKPT";
inline constexpr int kCheckpointVersion = 1;

std::string SerializeKwsModel(const KwsModel& model, const CheckpointMeta& meta);
std::string SerializeDomainClassifier(const DomainClassifier& model, const CheckpointMeta& meta);

void SaveKwsModel(const std::string& path, const KwsModel& model, const CheckpointMeta& meta);
void SaveDomainClassifier(const std::string& path, const DomainClassifier& model,
                          const CheckpointMeta& meta);

struct LoadedKwsModel {
  KwsModel model;
  CheckpointMeta meta;
};

struct LoadedDomainClassifier {
  DomainClassifier model;
  CheckpointMeta meta;
};

/// Throw kParseError on a malformed header and kTruncated on a short blob.
LoadedKwsModel ParseKwsModel(const std::string& bytes);
LoadedDomainClassifier ParseDomainClassifier(const std::string& bytes);
LoadedKwsModel LoadKwsModel(const std::string& path);
LoadedDomainClassifier LoadDomainClassifier(const std::string& path);

/// Architecture name stored in a checkpoint, without loading the weights.
std::string PeekArchitecture(const std::string& path);

std::vector<const nn::Parameter*> ModelParams(const KwsModel& model);
nn::ParameterList ModelParams(KwsModel& model);

}  // namespace cwkws

#endif  // CWKWS_MODELS_CHECKPOINT_H_
