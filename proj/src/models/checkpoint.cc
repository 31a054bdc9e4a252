// src/models/checkpoint.cc

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

#include "cwkws/models/checkpoint.h"

#include <sstream>

#include "cwkws/common/error.h"
#include "cwkws/common/file_io.h"
#include "json.hpp"

namespace cwkws {

using nlohmann::json;

namespace {

json FrameSpecJson(const FrameSpec& s) {
  return {{"frame_len_ms", s.frame_len_ms}, {"shift_ms", s.shift_ms},
          {"n_mels", s.n_mels},             {"fft_size", s.fft_size},
          {"window", TaperWindowName(s.window)}, {"log_floor", s.log_floor}};
}

FrameSpec FrameSpecFromJson(const json& j) {
  FrameSpec s;
  s.frame_len_ms = j.at("frame_len_ms").get<double>();
  s.shift_ms = j.at("shift_ms").get<double>();
  s.n_mels = j.at("n_mels").get<std::size_t>();
  s.fft_size = j.at("fft_size").get<std::size_t>();
  s.window = ParseTaperWindow(j.at("window").get<std::string>());
  s.log_floor = j.at("log_floor").get<double>();
  return s;
}

json CnnConfigJson(const CnnConfig& c) {
  return {{"input_frames", c.input_frames},     {"n_mels", c.n_mels},
          {"conv1_channels", c.conv1_channels}, {"conv2_channels", c.conv2_channels},
          {"conv3_channels", c.conv3_channels}, {"fc_width", c.fc_width}};
}

CnnConfig CnnConfigFromJson(const json& j) {
  CnnConfig c;
  c.input_frames = j.at("input_frames").get<std::size_t>();
  c.n_mels = j.at("n_mels").get<std::size_t>();
  c.conv1_channels = j.at("conv1_channels").get<std::size_t>();
  c.conv2_channels = j.at("conv2_channels").get<std::size_t>();
  c.conv3_channels = j.at("conv3_channels").get<std::size_t>();
  c.fc_width = j.at("fc_width").get<std::size_t>();
  return c;
}

json DomainsJson(const std::vector<Domain>& ds) {
  json a = json::array();
  for (Domain d : ds) a.push_back(std::string(DomainName(d)));
  return a;
}

std::vector<Domain> DomainsFromJson(const json& j) {
  std::vector<Domain> out;
  for (const auto& d : j) out.push_back(ParseDomain(d.get<std::string>()));
  return out;
}

std::string Serialize(const std::string& architecture, const json& config,
                      std::span<const nn::Parameter* const> params, const CheckpointMeta& meta) {
  json header;
  header["format_version"] = kCheckpointVersion;
  header["architecture"] = architecture;
  header["config"] = config;
  json plist = json::array();
  for (const auto* p : params) plist.push_back({{"name", p->name}, {"shape", p->value.shape()}});
  header["params"] = plist;
  header["domains"] = DomainsJson(meta.domains);
  header["feature_spec"] = FrameSpecJson(meta.feature_spec);
  header["seed"] = meta.seed;
  header["setup"] = meta.setup;
  json log = json::array();
  for (const auto& e : meta.train_log) log.push_back({e.epoch, e.loss, e.lr});
  header["train_log"] = log;

  std::string out = std::string(kCheckpointMagic) + " " + std::to_string(kCheckpointVersion) + "\n";
  out += header.dump();
  out += "\n";
  for (const auto* p : params)
    for (double v : p->value.values()) AppendDoubleLe(out, v);
  return out;
}

struct ParsedHeader {
  json header;
  std::size_t blob_offset = 0;
};

ParsedHeader ParseHeader(const std::string& bytes) {
  const std::size_t l1 = bytes.find('\n');
  const std::string magic = std::string(kCheckpointMagic) + " ";
  if (l1 == std::string::npos || bytes.compare(0, magic.size(), magic) != 0)
    Fail(ErrorCode::kParseError, "not a cwkws checkpoint");
  const int version = std::atoi(bytes.substr(magic.size(), l1 - magic.size()).c_str());
  if (version != kCheckpointVersion)
    Fail(ErrorCode::kParseError, "unsupported checkpoint version " + std::to_string(version));
  const std::size_t l2 = bytes.find('\n', l1 + 1);
  if (l2 == std::string::npos) Fail(ErrorCode::kTruncated, "checkpoint header is incomplete");
  ParsedHeader out;
  try {
    out.header = json::parse(bytes.substr(l1 + 1, l2 - l1 - 1));
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParseError, std::string("bad checkpoint header: ") + e.what());
  }
  out.blob_offset = l2 + 1;
  return out;
}

CheckpointMeta MetaFromJson(const json& h) {
  CheckpointMeta meta;
  meta.setup = h.value("setup", std::string());
  meta.seed = h.value("seed", std::uint64_t{0});
  meta.feature_spec = FrameSpecFromJson(h.at("feature_spec"));
  meta.domains = DomainsFromJson(h.at("domains"));
  for (const auto& e : h.at("train_log"))
    meta.train_log.push_back({e.at(0).get<int>(), e.at(1).get<double>(), e.at(2).get<double>()});
  return meta;
}

void FillParams(const json& h, const std::string& bytes, std::size_t offset,
                std::span<nn::Parameter* const> params) {
  const json& plist = h.at("params");
  if (plist.size() != params.size())
    Fail(ErrorCode::kParseError, "checkpoint lists " + std::to_string(plist.size()) +
                                     " parameters, model has " + std::to_string(params.size()));
  std::size_t pos = offset;
  for (std::size_t k = 0; k < params.size(); ++k) {
    nn::Parameter& p = *params[k];
    const auto name = plist[k].at("name").get<std::string>();
    const auto shape = plist[k].at("shape").get<nn::Shape>();
    if (name != p.name || shape != p.value.shape())
      Fail(ErrorCode::kShapeMismatch, "checkpoint parameter " + name + " " +
                                          nn::ShapeString(shape) + " does not match " + p.name +
                                          " " + nn::ShapeString(p.value.shape()));
    const std::size_t need = p.value.size() * 8;
    if (bytes.size() < pos + need)
      Fail(ErrorCode::kTruncated, "checkpoint blob ends inside " + name);
    double* dst = p.value.data();
    for (std::size_t i = 0; i < p.value.size(); ++i) dst[i] = ReadDoubleLe(bytes.data() + pos + 8 * i);
    pos += need;
    p.grad.SetZero();
    p.velocity.SetZero();
  }
  if (pos != bytes.size()) Fail(ErrorCode::kParseError, "trailing bytes after checkpoint blob");
}

}  // namespace

std::vector<const nn::Parameter*> ModelParams(const KwsModel& model) {
  return std::visit([](const auto& m) { return m.Params(); }, model);
}

nn::ParameterList ModelParams(KwsModel& model) {
  return std::visit([](auto& m) { return m.Params(); }, model);
}

std::string SerializeKwsModel(const KwsModel& model, const CheckpointMeta& meta) {
  if (const auto* m = std::get_if<KwsCnn>(&model)) {
    return Serialize(KwsCnn::kArchitecture, CnnConfigJson(m->config()), m->Params(), meta);
  }
  const auto& e = std::get<EmbKwsCnn>(model);
  json cfg = CnnConfigJson(e.config());
  cfg["embedding_dim"] = e.embedding_dim();
  cfg["head_width"] = e.head_width();
  return Serialize(EmbKwsCnn::kArchitecture, cfg, e.Params(), meta);
}

std::string SerializeDomainClassifier(const DomainClassifier& model, const CheckpointMeta& meta) {
  const auto& c = model.config();
  json cfg = {{"input_dim", c.input_dim}, {"hidden", c.hidden}, {"domains", DomainsJson(c.domains)}};
  return Serialize(DomainClassifier::kArchitecture, cfg, model.Params(), meta);
}

void SaveKwsModel(const std::string& path, const KwsModel& model, const CheckpointMeta& meta) {
  WriteStringToFile(path, SerializeKwsModel(model, meta));
}

void SaveDomainClassifier(const std::string& path, const DomainClassifier& model,
                          const CheckpointMeta& meta) {
  WriteStringToFile(path, SerializeDomainClassifier(model, meta));
}

LoadedKwsModel ParseKwsModel(const std::string& bytes) {
  ParsedHeader ph = ParseHeader(bytes);
  const json& h = ph.header;
  try {
    const auto arch = h.at("architecture").get<std::string>();
    const CnnConfig cfg = CnnConfigFromJson(h.at("config"));
    KwsModel model = KwsCnn(cfg);
    if (arch == EmbKwsCnn::kArchitecture) {
      model = EmbKwsCnn(cfg, h.at("config").at("embedding_dim").get<std::size_t>(),
                        h.at("config").at("head_width").get<std::size_t>());
    } else if (arch != KwsCnn::kArchitecture) {
      Fail(ErrorCode::kParseError, "checkpoint holds '" + arch + "', not a keyword model");
    }
    FillParams(h, bytes, ph.blob_offset, ModelParams(model));
    return {std::move(model), MetaFromJson(h)};
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParseError, std::string("bad checkpoint header: ") + e.what());
  }
}

LoadedDomainClassifier ParseDomainClassifier(const std::string& bytes) {
  ParsedHeader ph = ParseHeader(bytes);
  const json& h = ph.header;
  try {
    const auto arch = h.at("architecture").get<std::string>();
    if (arch != DomainClassifier::kArchitecture)
      Fail(ErrorCode::kParseError, "checkpoint holds '" + arch + "', not a domain classifier");
    DomainClassifierConfig cfg;
    cfg.input_dim = h.at("config").at("input_dim").get<std::size_t>();
    cfg.hidden = h.at("config").at("hidden").get<std::size_t>();
    cfg.domains = DomainsFromJson(h.at("config").at("domains"));
    DomainClassifier model(cfg);
    FillParams(h, bytes, ph.blob_offset, model.Params());
    return {std::move(model), MetaFromJson(h)};
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParseError, std::string("bad checkpoint header: ") + e.what());
  }
}

LoadedKwsModel LoadKwsModel(const std::string& path) {
  return ParseKwsModel(ReadFileToString(path, ErrorCode::kMissingSource));
}

LoadedDomainClassifier LoadDomainClassifier(const std::string& path) {
  return ParseDomainClassifier(ReadFileToString(path, ErrorCode::kMissingSource));
}

std::string PeekArchitecture(const std::string& path) {
  const std::string bytes = ReadFileToString(path, ErrorCode::kMissingSource);
  return ParseHeader(bytes).header.value("architecture", std::string());
}

}  // namespace cwkws
