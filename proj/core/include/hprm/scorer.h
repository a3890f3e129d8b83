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

#ifndef HPRM_SCORER_H_
#define HPRM_SCORER_H_

#include <span>
#include <vector>

#include "hprm/hotword_bank.h"
#include "hprm/lexicon.h"
#include "hprm/scorer_model.h"
#include "hprm/similarity.h"

namespace hprm {

// Pairs scored per network call during bank scoring.
inline constexpr int kScoreChunk = 64;

struct ScoredPair {
  int hotword_id = 0;
  double score = 0.0;  // positive-class probability

  bool operator==(const ScoredPair&) const = default;
};

// Embeds both sides, builds the cosine canvas and returns the softmax
// probability of the match class. Throws kVocabMismatch if the model was not
// trained on `vocab`, kUnknownPhoneme for symbols outside it.
ScoredPair ScorePair(const ScorerModel& model, const PhonemeVocab& vocab,
                     const HotwordEntry& hotword,
                     const PhonemeSequence& text_phonemes);

// Scores one transcript against every entry; out[i] belongs to entries[i].
// Each score depends only on (model, entry, text), never on the thread count
// or on which entries share a chunk.
std::vector<double> ScoreEntries(const ScorerModel& model,
                                 std::span<const int> text_ids,
                                 std::span<const HotwordEntry> entries,
                                 int threads = 1);

// The canvas the network sees for a pair: cosine of the model's embedding
// rows, exactly 1 where both sides carry the same phoneme id.
SimilarityCanvas PairCanvas(const ScorerModel& model,
                            std::span<const int> hotword_ids,
                            std::span<const int> text_ids);

// Scores arbitrary (hotword, text) pairs.
std::vector<double> ScorePairs(const ScorerModel& model,
                               std::span<const std::vector<int>> hotword_ids,
                               std::span<const std::vector<int>> text_ids,
                               int threads = 1);

}  // namespace hprm

#endif  // HPRM_SCORER_H_
