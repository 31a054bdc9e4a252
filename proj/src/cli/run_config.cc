// src/cli/run_config.cc

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

#include "cwkws/cli/run_config.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "cwkws/common/error.h"

namespace cwkws {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void BadValue(const std::string& key, const std::string& value,
                           const std::string& want) {
  Fail(ErrorCode::kInvalidConfig, "key '" + key + "': expected " + want + ", got '" + value + "'");
}

double ToDouble(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    BadValue(key, v, "a number");
  }
  if (used != v.size()) BadValue(key, v, "a number");
  return d;
}

std::uint64_t ToUnsigned(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) BadValue(key, v, "a non-negative integer");
  return out;
}

int ToInt(const std::string& key, const std::string& v) {
  const auto u = ToUnsigned(key, v);
  if (u > 1'000'000'000ULL) BadValue(key, v, "a smaller integer");
  return static_cast<int>(u);
}

bool ToBool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  BadValue(key, v, "true or false");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& Setters() {
  using K = const std::string&;
  static const std::map<std::string, Setter> table = {
      // paths
      {"work_dir", [](RunConfig& c, K, K v) { c.work_dir = v; }},
      {"train_manifest", [](RunConfig& c, K, K v) { c.train_manifest = v; }},
      {"train_alignments", [](RunConfig& c, K, K v) { c.train_alignments = v; }},
      {"synthetic_manifest", [](RunConfig& c, K, K v) { c.synthetic_manifest = v; }},
      {"test_real_manifest", [](RunConfig& c, K, K v) { c.test_real_manifest = v; }},
      {"test_cw_manifest", [](RunConfig& c, K, K v) { c.test_cw_manifest = v; }},
      {"domain_checkpoint", [](RunConfig& c, K, K v) { c.domain_checkpoint = v; }},
      // features
      {"keyword", [](RunConfig& c, K, K v) { c.dataset.keyword = SplitList(v); }},
      {"sample_rate_hz", [](RunConfig& c, K k, K v) { c.dataset.sample_rate_hz = ToInt(k, v); }},
      {"frame_len_ms", [](RunConfig& c, K k, K v) { c.dataset.feature_spec.frame_len_ms = ToDouble(k, v); }},
      {"shift_ms", [](RunConfig& c, K k, K v) { c.dataset.feature_spec.shift_ms = ToDouble(k, v); }},
      {"n_mels",
       [](RunConfig& c, K k, K v) {
         c.dataset.feature_spec.n_mels = ToUnsigned(k, v);
         c.train.cnn.n_mels = c.dataset.feature_spec.n_mels;
       }},
      {"fft_size", [](RunConfig& c, K k, K v) { c.dataset.feature_spec.fft_size = ToUnsigned(k, v); }},
      {"window", [](RunConfig& c, K, K v) { c.dataset.feature_spec.window = ParseTaperWindow(v); }},
      {"log_floor", [](RunConfig& c, K k, K v) { c.dataset.feature_spec.log_floor = ToDouble(k, v); }},
      // model widths
      {"conv1_channels", [](RunConfig& c, K k, K v) { c.train.cnn.conv1_channels = ToUnsigned(k, v); }},
      {"conv2_channels", [](RunConfig& c, K k, K v) { c.train.cnn.conv2_channels = ToUnsigned(k, v); }},
      {"conv3_channels", [](RunConfig& c, K k, K v) { c.train.cnn.conv3_channels = ToUnsigned(k, v); }},
      {"fc_width", [](RunConfig& c, K k, K v) { c.train.cnn.fc_width = ToUnsigned(k, v); }},
      {"head_width", [](RunConfig& c, K k, K v) { c.train.head_width = ToUnsigned(k, v); }},
      // kws training
      {"setup", [](RunConfig& c, K, K v) { c.train.setup = ParseSetup(v); }},
      {"epochs", [](RunConfig& c, K k, K v) { c.train.epochs = ToInt(k, v); }},
      {"lr", [](RunConfig& c, K k, K v) { c.train.sgd.lr = ToDouble(k, v); }},
      {"momentum", [](RunConfig& c, K k, K v) { c.train.sgd.momentum = ToDouble(k, v); }},
      {"nesterov", [](RunConfig& c, K k, K v) { c.train.sgd.nesterov = ToBool(k, v); }},
      {"batch", [](RunConfig& c, K k, K v) { c.train.batch = ToUnsigned(k, v); }},
      {"plateau_patience", [](RunConfig& c, K k, K v) { c.train.plateau_patience = ToInt(k, v); }},
      {"plateau_factor", [](RunConfig& c, K k, K v) { c.train.plateau_factor = ToDouble(k, v); }},
      {"min_lr", [](RunConfig& c, K k, K v) { c.train.min_lr = ToDouble(k, v); }},
      {"seed",
       [](RunConfig& c, K k, K v) {
         c.train.seed = ToUnsigned(k, v);
         c.domain.seed = c.train.seed;
       }},
      {"threads",
       [](RunConfig& c, K k, K v) {
         c.train.threads = ToInt(k, v);
         c.domain.threads = c.train.threads;
       }},
      // augmentation
      {"mask_min_frac", [](RunConfig& c, K k, K v) { c.dataset.mask.min_frac = ToDouble(k, v); }},
      {"mask_max_frac", [](RunConfig& c, K k, K v) { c.dataset.mask.max_frac = ToDouble(k, v); }},
      {"mask_noise_scale", [](RunConfig& c, K k, K v) { c.dataset.mask.noise_scale = ToDouble(k, v); }},
      {"concat_min_seconds", [](RunConfig& c, K k, K v) { c.dataset.concat_min_seconds = ToDouble(k, v); }},
      {"concat_pad_sigma", [](RunConfig& c, K k, K v) { c.dataset.concat_pad_sigma = ToDouble(k, v); }},
      {"negative_stride", [](RunConfig& c, K k, K v) { c.dataset.negative_stride = ToUnsigned(k, v); }},
      // domain classifier
      {"domain_epochs", [](RunConfig& c, K k, K v) { c.domain.epochs = ToInt(k, v); }},
      {"domain_lr", [](RunConfig& c, K k, K v) { c.domain.sgd.lr = ToDouble(k, v); }},
      {"domain_momentum", [](RunConfig& c, K k, K v) { c.domain.sgd.momentum = ToDouble(k, v); }},
      {"domain_batch", [](RunConfig& c, K k, K v) { c.domain.batch = ToUnsigned(k, v); }},
      {"domain_hidden", [](RunConfig& c, K k, K v) { c.domain.hidden = ToUnsigned(k, v); }},
      {"domain_per_domain", [](RunConfig& c, K k, K v) { c.domain_per_domain = ToUnsigned(k, v); }},
      {"domain_heldout", [](RunConfig& c, K k, K v) { c.domain.heldout_fraction = ToDouble(k, v); }},
      {"domain_max_frames", [](RunConfig& c, K k, K v) { c.domain.max_frames = ToUnsigned(k, v); }},
      // detection and evaluation
      {"threshold", [](RunConfig& c, K k, K v) { c.detection.threshold = ToDouble(k, v); }},
      {"stride", [](RunConfig& c, K k, K v) { c.detection.stride = ToUnsigned(k, v); }},
      {"lockout", [](RunConfig& c, K k, K v) { c.detection.lockout = ToUnsigned(k, v); }},
      {"sets", [](RunConfig& c, K, K v) { c.sets = SplitList(v); }},
      {"fa", [](RunConfig& c, K, K v) { c.fa = ParseDoubleList(v); }},
  };
  return table;
}

}  // namespace

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (item.empty()) Fail(ErrorCode::kInvalidConfig, "empty item in list '" + s + "'");
    out.push_back(item);
  }
  if (out.empty()) Fail(ErrorCode::kInvalidConfig, "empty list");
  return out;
}

std::vector<double> ParseDoubleList(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : SplitList(s)) out.push_back(ToDouble("list", item));
  return out;
}

void RunConfig::Set(const std::string& key, const std::string& value) {
  auto it = Setters().find(key);
  if (it == Setters().end()) Fail(ErrorCode::kInvalidConfig, "unknown config key '" + key + "'");
  it->second(*this, key, value);
}

void RunConfig::Validate() const {
  dataset.feature_spec.Validate(dataset.sample_rate_hz);
  if (dataset.keyword.size() < 2)
    Fail(ErrorCode::kInvalidConfig, "keyword needs at least two subwords");
  dataset.mask.Validate();
  if (dataset.negative_stride == 0)
    Fail(ErrorCode::kInvalidConfig, "negative_stride must be >= 1");
  if (dataset.feature_spec.n_mels != train.cnn.n_mels)
    Fail(ErrorCode::kInvalidConfig, "n_mels must match the model input width (" +
                                        std::to_string(train.cnn.n_mels) + ")");
  train.Validate();
  domain.Validate();
  if (domain_per_domain == 0) Fail(ErrorCode::kInvalidConfig, "domain_per_domain must be >= 1");
  detection.Validate();
  for (const auto& s : sets)
    if (std::find(kTestSetNames.begin(), kTestSetNames.end(), s) == kTestSetNames.end())
      Fail(ErrorCode::kInvalidConfig, "unknown test set '" + s + "' (want real or real+cw)");
  for (double f : fa)
    if (!(f >= 0.0)) Fail(ErrorCode::kInvalidConfig, "FA/h targets must be >= 0");
}

std::filesystem::path RunConfig::Resolve(const std::filesystem::path& p) const {
  if (p.empty() || p.is_absolute()) return p;
  return base_dir / p;
}

std::filesystem::path RunConfig::DomainCheckpoint() const {
  if (!domain_checkpoint.empty()) return Resolve(domain_checkpoint);
  return ModelsDir() / "domain.ckpt";
}

RunConfig ParseRunConfig(std::istream& in, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  cfg.base_dir = base_dir;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      Fail(ErrorCode::kParseError, "config line " + std::to_string(line_no) + ": missing '='");
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (!seen.insert(key).second)
      Fail(ErrorCode::kInvalidConfig, "config key '" + key + "' given twice");
    cfg.Set(key, value);
  }
  return cfg;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kMissingSource, "cannot open config " + path.string());
  return ParseRunConfig(in, path.parent_path().empty() ? "." : path.parent_path());
}

}  // namespace cwkws
