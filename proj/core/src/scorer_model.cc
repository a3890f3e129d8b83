// Copyright (c) 2026 The hprm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hprm/scorer_model.h"

#include <cmath>

#include "hprm/error.h"
#include "hprm/rng.h"
#include "json.hpp"

namespace hprm {

namespace {

constexpr int kModelFormatVersion = 1;
constexpr const char* kModelFormat = "hprm-scorer";

}  // namespace

void ValidateConfig(const ModelConfig& c) {
  auto bad = [](const std::string& why) {
    throw HprmError(ErrorCode::kBadInput, "model config: " + why);
  };
  if (c.vocab_size < 2) bad("vocab_size must be >= 2");
  if (c.channels.empty()) bad("at least one conv layer");
  for (int ch : c.channels) {
    if (ch < 1) bad("channel counts must be positive");
  }
  if (c.fc_hidden < 1 || c.embed_dim < 1) bad("dims must be positive");
  if (c.canvas_rows < 1 || c.canvas_cols < 1) bad("canvas dims must be positive");
}

ParamLayout ParamLayout::For(const ModelConfig& c) {
  ParamLayout l;
  auto add = [&](std::string name, ParamKind kind, int rows, int cols) {
    l.slots.push_back({std::move(name), kind, l.total, rows, cols});
    l.total += static_cast<size_t>(rows) * cols;
  };
  add("embedding", ParamKind::kEmbedding, c.vocab_size, c.embed_dim);
  int in = 1;
  for (size_t i = 0; i < c.channels.size(); ++i) {
    add("conv" + std::to_string(i + 1) + ".weight", ParamKind::kWeight,
        c.channels[i], in * 9);
    add("conv" + std::to_string(i + 1) + ".bias", ParamKind::kBias,
        c.channels[i], 1);
    in = c.channels[i];
  }
  add("fc1.weight", ParamKind::kWeight, c.fc_hidden, in);
  add("fc1.bias", ParamKind::kBias, c.fc_hidden, 1);
  add("fc2.weight", ParamKind::kWeight, 2, c.fc_hidden);
  add("fc2.bias", ParamKind::kBias, 2, 1);
  return l;
}

template <typename T>
ScorerModelT<T> InitModel(const ModelConfig& config) {
  ValidateConfig(config);
  ScorerModelT<T> m;
  m.config = config;
  m.layout = ParamLayout::For(config);
  m.params.assign(m.layout.total, T(0));
  Rng rng(config.seed);
  for (const ParamSlot& s : m.layout.slots) {
    T* p = m.data(s);
    switch (s.kind) {
      case ParamKind::kEmbedding:
        for (size_t i = 0; i < s.size(); ++i) {
          p[i] = static_cast<T>(rng.Uniform(-0.1, 0.1));
        }
        for (int d = 0; d < s.cols; ++d) p[d] = T(0);  // PAD
        break;
      case ParamKind::kWeight: {
        double stddev = std::sqrt(2.0 / s.cols);
        for (size_t i = 0; i < s.size(); ++i) {
          p[i] = static_cast<T>(rng.Normal() * stddev);
        }
        break;
      }
      case ParamKind::kBias:
        break;
    }
  }
  return m;
}

template ScorerModelT<float> InitModel<float>(const ModelConfig&);
template ScorerModelT<double> InitModel<double>(const ModelConfig&);

template <typename T>
Matrix<T> EmbedSequence(const ScorerModelT<T>& model, std::span<const int> ids) {
  Matrix<T> out(static_cast<int>(ids.size()), model.config.embed_dim);
  for (size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] <= 0 || ids[i] >= model.config.vocab_size) {
      throw HprmError(ErrorCode::kUnknownPhoneme,
                      "phoneme id " + std::to_string(ids[i]) + " out of range");
    }
    auto row = model.embedding_row(ids[i]);
    std::copy(row.begin(), row.end(), out.Row(static_cast<int>(i)).begin());
  }
  return out;
}

template Matrix<float> EmbedSequence(const ScorerModelT<float>&,
                                     std::span<const int>);
template Matrix<double> EmbedSequence(const ScorerModelT<double>&,
                                      std::span<const int>);

Sha256Digest ParameterHash(const ScorerModel& model) {
  ByteWriter w;
  for (float v : model.params) w.F32(v);
  return Sha256(w.bytes());
}

std::vector<uint8_t> SaveModel(const ScorerModel& model) {
  const ModelConfig& c = model.config;
  nlohmann::json header = {
      {"format", kModelFormat},
      {"version", kModelFormatVersion},
      {"vocab_hash", ToHex(model.vocab_hash)},
      {"vocab_size", c.vocab_size},
      {"canvas_rows", c.canvas_rows},
      {"canvas_cols", c.canvas_cols},
      {"channels", c.channels},
      {"fc_hidden", c.fc_hidden},
      {"embed_dim", c.embed_dim},
      {"seed", c.seed},
  };
  ByteWriter w;
  w.Str(header.dump());
  for (float v : model.params) w.F32(v);
  w.Checksum();
  return w.Release();
}

ScorerModel LoadModel(std::span<const uint8_t> bytes,
                      const Sha256Digest& vocab_hash) {
  ByteReader r(bytes, ErrorCode::kCorruptModel);
  nlohmann::json header;
  ModelConfig c;
  std::string stored_hash;
  try {
    header = nlohmann::json::parse(r.Str());
    if (header.at("format") != kModelFormat ||
        header.at("version") != kModelFormatVersion) {
      r.Fail("unsupported model format");
    }
    stored_hash = header.at("vocab_hash").get<std::string>();
    c.vocab_size = header.at("vocab_size").get<int>();
    c.canvas_rows = header.at("canvas_rows").get<int>();
    c.canvas_cols = header.at("canvas_cols").get<int>();
    c.channels = header.at("channels").get<std::vector<int>>();
    c.fc_hidden = header.at("fc_hidden").get<int>();
    c.embed_dim = header.at("embed_dim").get<int>();
    c.seed = header.at("seed").get<uint64_t>();
    ValidateConfig(c);
  } catch (const nlohmann::json::exception& e) {
    r.Fail(std::string("bad header: ") + e.what());
  } catch (const HprmError& e) {
    if (e.code() == ErrorCode::kCorruptModel) throw;
    r.Fail(e.what());
  }
  ScorerModel m;
  m.config = c;
  m.layout = ParamLayout::For(c);
  if (r.remaining() != m.layout.total * 4 + 4) r.Fail("tensor size mismatch");
  m.params.resize(m.layout.total);
  for (float& v : m.params) v = r.F32();
  r.VerifyChecksum();
  m.vocab_hash = vocab_hash;
  if (stored_hash != ToHex(vocab_hash)) {
    throw HprmError(ErrorCode::kVocabMismatch,
                    "model trained on vocab " + stored_hash.substr(0, 12) +
                        ", active vocab " + ToHex(vocab_hash).substr(0, 12));
  }
  return m;
}

void SaveModelFile(const ScorerModel& model,
                   const std::filesystem::path& path) {
  WriteFileAtomic(path, SaveModel(model));
}

ScorerModel LoadModelFile(const std::filesystem::path& path,
                          const Sha256Digest& vocab_hash) {
  return LoadModel(ReadFileBytes(path), vocab_hash);
}

}  // namespace hprm
