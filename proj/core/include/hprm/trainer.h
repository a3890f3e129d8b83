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

#ifndef HPRM_TRAINER_H_
#define HPRM_TRAINER_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hprm/adamw.h"
#include "hprm/corpus.h"
#include "hprm/hotword_bank.h"
#include "hprm/lexicon.h"
#include "hprm/mining.h"
#include "hprm/scorer_model.h"

namespace hprm {

struct TrainConfig {
  int epochs = 50;
  double lr = 1e-4;
  int batch_size = 32;
  int mining_rounds = 3;
  uint64_t seed = 1;
  int negatives_per_positive = 3;
  int augment_per_hotword = 2;
  double train_fraction = 0.9;
  double mer_lo = 0.02;
  double mer_hi = 0.20;
  double weight_decay = 0.01;
  int threads = 1;
  // Gradients are always reduced over fixed sub-batches in order, so results
  // do not depend on `threads`; the flag is kept for the command line.
  bool deterministic = true;
  bool evaluate_rounds = true;
  std::vector<int> report_n = {1, 3, 10, 50};
  ModelConfig model;  // vocab_size and seed are filled in by Train
};

// Epochs per mining round: everything in one round, otherwise 40% (rounded
// up) in the first and the rest split evenly, earlier rounds taking the
// remainder. 50 epochs over 3 rounds gives 20/15/15.
std::vector<int> EpochSchedule(int epochs, int rounds);

struct RoundReport {
  int round = 0;
  int epochs = 0;
  std::map<std::string, int> pair_counts;  // by stage name
  int mined_negatives = 0;
  int augmented_positives = 0;
  std::vector<double> epoch_loss;
  double heldout_accuracy = 0.0;
  double heldout_auc = 0.0;
  std::map<int, double> prrr;
};

struct TrainingReport {
  TrainConfig config;
  size_t train_records = 0;
  size_t heldout_records = 0;
  std::vector<RoundReport> rounds;

  std::string ToJson() const;
};

struct TrainResult {
  ScorerModel model;
  TrainingReport report;
  std::vector<CorpusRecord> train;
  std::vector<CorpusRecord> heldout;
};

// Splits the corpus, builds the initial pairs and runs the mining rounds:
// round 1 trains on initial pairs; each later round first appends negatives
// mined with the current model, and the last one also appends augmented
// positives. After each round the held-out pairs and records are scored when
// config.evaluate_rounds is set. Throws kNonFiniteLoss with the
// round/epoch/batch coordinates.
TrainResult Train(std::span<const CorpusRecord> corpus, const HotwordBank& bank,
                  const PhonemeVocab& vocab, const Lexicon& lexicon,
                  const TrainConfig& config);

// Held-out pair classification: positives and k negatives per hotword.
struct PairEvaluation {
  double accuracy = 0.0;
  double auc = 0.0;
  size_t pairs = 0;
};
PairEvaluation EvaluatePairs(const ScorerModel& model, const PhonemeVocab& vocab,
                             const HotwordBank& bank, const Lexicon& lexicon,
                             std::span<const TrainingPair> pairs, int threads = 1);

}  // namespace hprm

#endif  // HPRM_TRAINER_H_
