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

#ifndef HPRM_SCORER_MODEL_H_
#define HPRM_SCORER_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hprm/binary_io.h"
#include "hprm/matrix.h"
#include "hprm/similarity.h"

namespace hprm {

struct ModelConfig {
  int canvas_rows = kDefaultCanvasRows;
  int canvas_cols = kDefaultCanvasCols;
  std::vector<int> channels = {16, 32, 64, 128, 128};
  int fc_hidden = 64;
  int embed_dim = 32;
  int vocab_size = 0;
  uint64_t seed = 0;

  bool operator==(const ModelConfig&) const = default;
};

enum class ParamKind { kEmbedding, kWeight, kBias };

struct ParamSlot {
  std::string name;
  ParamKind kind;
  size_t offset;
  int rows;
  int cols;
  size_t size() const { return static_cast<size_t>(rows) * cols; }
};

// Flat parameter layout in serialization order: embedding, then weight and
// bias of every conv layer, fc1 and fc2. Conv weights are
// [out][in * 3 * 3] with (channel, dy, dx) ordering.
struct ParamLayout {
  std::vector<ParamSlot> slots;
  size_t total = 0;

  static ParamLayout For(const ModelConfig& config);
  const ParamSlot& embedding() const { return slots[0]; }
  const ParamSlot& conv_weight(int layer) const { return slots[1 + 2 * layer]; }
  const ParamSlot& conv_bias(int layer) const { return slots[2 + 2 * layer]; }
  const ParamSlot& fc_weight(int i) const {
    return slots[slots.size() - 4 + 2 * i];
  }
  const ParamSlot& fc_bias(int i) const {
    return slots[slots.size() - 3 + 2 * i];
  }
};

// Embedding table, five conv layers, two dense layers. Parameters live in
// one flat buffer so gradients and optimizer moments share the layout.
template <typename T>
struct ScorerModelT {
  ModelConfig config;
  ParamLayout layout;
  std::vector<T> params;
  // Hash of the phoneme vocabulary the embedding rows are indexed by.
  Sha256Digest vocab_hash{};

  int num_conv() const { return static_cast<int>(config.channels.size()); }
  T* data(const ParamSlot& s) { return params.data() + s.offset; }
  const T* data(const ParamSlot& s) const { return params.data() + s.offset; }
  std::span<const T> embedding_row(int id) const {
    return {data(layout.embedding()) + static_cast<size_t>(id) * config.embed_dim,
            static_cast<size_t>(config.embed_dim)};
  }
};

using ScorerModel = ScorerModelT<float>;

// Throws kBadInput for a malformed config (vocab < 2, no conv layers, ...).
void ValidateConfig(const ModelConfig& config);

// He fan-in normal init for conv/dense weights, zero biases, uniform
// [-0.1, 0.1] embeddings with the PAD row zeroed. Deterministic in seed.
template <typename T>
ScorerModelT<T> InitModel(const ModelConfig& config);

inline ScorerModel InitModel(int vocab_size, uint64_t seed) {
  ModelConfig c;
  c.vocab_size = vocab_size;
  c.seed = seed;
  return InitModel<float>(c);
}

template <typename To, typename From>
ScorerModelT<To> CastModel(const ScorerModelT<From>& m) {
  ScorerModelT<To> out;
  out.config = m.config;
  out.layout = m.layout;
  out.params.assign(m.params.begin(), m.params.end());
  out.vocab_hash = m.vocab_hash;
  return out;
}

// Embedding rows for a phoneme id sequence.
template <typename T>
Matrix<T> EmbedSequence(const ScorerModelT<T>& model, std::span<const int> ids);

// SHA-256 over the little-endian float32 parameter bytes.
Sha256Digest ParameterHash(const ScorerModel& model);

// Length-prefixed JSON header (format version, vocab hash, canvas dims,
// channels, fc width, embedding dim, seed), float32 tensors in layout order,
// trailing CRC-32.
std::vector<uint8_t> SaveModel(const ScorerModel& model);
// Throws kCorruptModel or kVocabMismatch.
ScorerModel LoadModel(std::span<const uint8_t> bytes,
                      const Sha256Digest& vocab_hash);
void SaveModelFile(const ScorerModel& model, const std::filesystem::path& path);
ScorerModel LoadModelFile(const std::filesystem::path& path,
                          const Sha256Digest& vocab_hash);

}  // namespace hprm

#endif  // HPRM_SCORER_MODEL_H_
