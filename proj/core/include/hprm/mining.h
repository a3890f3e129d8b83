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

#ifndef HPRM_MINING_H_
#define HPRM_MINING_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hprm/corpus.h"
#include "hprm/hotword_bank.h"
#include "hprm/lexicon.h"
#include "hprm/scorer_model.h"

namespace hprm {

enum class PairStage { kInitial, kMinedNegative, kAugmentedPositive };

const char* PairStageName(PairStage stage);

struct TrainingPair {
  // Bank id of the hotword side, or -1 for an augmented variant.
  int hotword_id = -1;
  std::string hotword;
  std::string text;
  int label = 0;  // 1 = match
  PairStage stage = PairStage::kInitial;

  bool operator==(const TrainingPair&) const = default;
};

struct InitialPairOptions {
  int negatives_per_positive = 3;
  double mer_lo = 0.02;
  double mer_hi = 0.20;
  uint64_t seed = 1;
};

// One positive per (record, ground-truth hotword) paired with the record's
// hypothesis, plus k random non-matching bank hotwords as negatives on the
// same hypothesis. Records whose hypothesis MER falls outside the band are
// skipped with a warning. The result is shuffled with the seed.
std::vector<TrainingPair> BuildInitialPairs(std::span<const CorpusRecord> records,
                                            const HotwordBank& bank,
                                            const InitialPairOptions& options);

// For every record hotword, the first of the record's top-2 retrievals that
// is not one of its ground-truth hotwords becomes a negative on the
// hypothesis; nothing when both are ground truth. One retrieval per record;
// a hotword is mined at most once per record.
std::vector<TrainingPair> MineNegatives(const ScorerModel& model,
                                        const PhonemeVocab& vocab,
                                        const HotwordBank& bank,
                                        const Lexicon& lexicon,
                                        std::span<const CorpusRecord> records,
                                        int threads = 1);

// Same rule from precomputed top-2 ids per record (-1 for a missing rank).
std::vector<TrainingPair> MineFromRankings(
    std::span<const CorpusRecord> records, const HotwordBank& bank,
    std::span<const std::array<int, 2>> top2);

// Up to m variants per Han hotword of two or more characters, each with one
// character swapped for a homophone or a confusable-initial character,
// paired positive with the clean reference.
std::vector<TrainingPair> AugmentPositives(std::span<const CorpusRecord> records,
                                           const Lexicon& lexicon,
                                           int variants_per_hotword,
                                           uint64_t seed);

// Characters reachable from `han_char` by a same-syllable swap or a
// confusable initial, excluding itself, in lexicon order.
std::vector<std::string> ConfusableChars(const std::string& han_char,
                                         const Lexicon& lexicon);

}  // namespace hprm

#endif  // HPRM_MINING_H_
