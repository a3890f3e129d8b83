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

#include "hprm/scorer.h"

#include <algorithm>
#include <cmath>
#include <memory>

#include "hprm/error.h"
#include "hprm/parallel.h"
#include "hprm/scorer_network.h"

namespace hprm {

namespace {

void CheckVocab(const ScorerModel& model, const Sha256Digest& hash) {
  if (model.vocab_hash != hash) {
    throw HprmError(ErrorCode::kVocabMismatch,
                    "model vocab " + ToHex(model.vocab_hash).substr(0, 12) +
                        " != " + ToHex(hash).substr(0, 12));
  }
}

}  // namespace

ScoredPair ScorePair(const ScorerModel& model, const PhonemeVocab& vocab,
                     const HotwordEntry& hotword,
                     const PhonemeSequence& text_phonemes) {
  CheckVocab(model, vocab.hash());
  std::vector<int> text_ids = vocab.Encode(text_phonemes);
  PairInput pair{hotword.phoneme_ids, text_ids};
  ScorerNetwork<float> net(model);
  std::vector<Logits<float>> logits;
  net.Forward(std::span<const PairInput>(&pair, 1), &logits);
  return {hotword.id, PositiveProbability(logits[0][0], logits[0][1])};
}

std::vector<double> ScoreEntries(const ScorerModel& model,
                                 std::span<const int> text_ids,
                                 std::span<const HotwordEntry> entries,
                                 int threads) {
  std::vector<double> scores(entries.size());
  const int chunks =
      static_cast<int>((entries.size() + kScoreChunk - 1) / kScoreChunk);
  threads = std::clamp(ResolveThreads(threads), 1, std::max(chunks, 1));
  std::vector<std::unique_ptr<ScorerNetwork<float>>> nets(threads);
  ParallelFor(chunks, threads, [&](int chunk, int worker) {
    if (!nets[worker]) {
      nets[worker] = std::make_unique<ScorerNetwork<float>>(model);
    }
    size_t begin = static_cast<size_t>(chunk) * kScoreChunk;
    size_t end = std::min(entries.size(), begin + kScoreChunk);
    std::vector<PairInput> batch;
    batch.reserve(end - begin);
    for (size_t i = begin; i < end; ++i) {
      batch.push_back({entries[i].phoneme_ids, text_ids});
    }
    std::vector<Logits<float>> logits;
    nets[worker]->Forward(batch, &logits);
    for (size_t i = begin; i < end; ++i) {
      scores[i] = PositiveProbability(logits[i - begin][0], logits[i - begin][1]);
    }
  });
  return scores;
}

SimilarityCanvas PairCanvas(const ScorerModel& model,
                            std::span<const int> hotword_ids,
                            std::span<const int> text_ids) {
  const ModelConfig& cfg = model.config;
  const int h = static_cast<int>(hotword_ids.size());
  const int w = std::min(static_cast<int>(text_ids.size()), cfg.canvas_cols);
  if (h < 1 || w < 1 || h > cfg.canvas_rows) {
    throw HprmError(ErrorCode::kShapeMismatch,
                    "pair does not fit a " + std::to_string(cfg.canvas_rows) +
                        "x" + std::to_string(cfg.canvas_cols) + " canvas");
  }
  const int dim = cfg.embed_dim;
  auto unit = [&](int id) {
    if (id <= 0 || id >= cfg.vocab_size) {
      throw HprmError(ErrorCode::kUnknownPhoneme, "phoneme id " + std::to_string(id));
    }
    auto e = model.embedding_row(id);
    float sq = 0;
    for (float x : e) sq += x * x;
    if (sq == 0.0f) {
      throw HprmError(ErrorCode::kZeroVectorRow, "embedding row " + std::to_string(id));
    }
    float norm = std::max<float>(std::sqrt(sq), static_cast<float>(kNormEpsilon));
    std::vector<float> u(dim);
    for (int d = 0; d < dim; ++d) u[d] = e[d] / norm;
    return u;
  };
  SimilarityCanvas c;
  c.rows = cfg.canvas_rows;
  c.cols = cfg.canvas_cols;
  c.valid_rows = h;
  c.valid_cols = w;
  c.values.assign(static_cast<size_t>(c.rows) * c.cols, 0.0f);
  std::vector<std::vector<float>> vs;
  for (int j = 0; j < w; ++j) vs.push_back(unit(text_ids[j]));
  for (int i = 0; i < h; ++i) {
    std::vector<float> u = unit(hotword_ids[i]);
    for (int j = 0; j < w; ++j) {
      float value;
      if (hotword_ids[i] == text_ids[j]) {
        value = 1.0f;
      } else {
        float dot = 0;
        for (int d = 0; d < dim; ++d) dot += u[d] * vs[j][d];
        value = std::clamp(dot, -1.0f, 1.0f);
      }
      c.values[static_cast<size_t>(i) * c.cols + j] = value;
    }
  }
  return c;
}

std::vector<double> ScorePairs(const ScorerModel& model,
                               std::span<const std::vector<int>> hotword_ids,
                               std::span<const std::vector<int>> text_ids,
                               int threads) {
  if (hotword_ids.size() != text_ids.size()) {
    throw HprmError(ErrorCode::kLengthMismatch, "pair lists differ in length");
  }
  std::vector<double> scores(hotword_ids.size());
  const int chunks =
      static_cast<int>((scores.size() + kScoreChunk - 1) / kScoreChunk);
  threads = std::clamp(ResolveThreads(threads), 1, std::max(chunks, 1));
  std::vector<std::unique_ptr<ScorerNetwork<float>>> nets(threads);
  ParallelFor(chunks, threads, [&](int chunk, int worker) {
    if (!nets[worker]) {
      nets[worker] = std::make_unique<ScorerNetwork<float>>(model);
    }
    size_t begin = static_cast<size_t>(chunk) * kScoreChunk;
    size_t end = std::min(scores.size(), begin + kScoreChunk);
    std::vector<PairInput> batch;
    for (size_t i = begin; i < end; ++i) {
      batch.push_back({hotword_ids[i], text_ids[i]});
    }
    std::vector<Logits<float>> logits;
    nets[worker]->Forward(batch, &logits);
    for (size_t i = begin; i < end; ++i) {
      scores[i] = PositiveProbability(logits[i - begin][0], logits[i - begin][1]);
    }
  });
  return scores;
}

}  // namespace hprm
