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

#ifndef HPRM_EVALUATION_H_
#define HPRM_EVALUATION_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hprm/hotword_bank.h"
#include "hprm/lexicon.h"
#include "hprm/metrics.h"
#include "hprm/retriever.h"
#include "hprm/scorer_model.h"

namespace hprm {

// Produces a final transcript from a record and its top-N hotwords, e.g. a
// biased second-pass recognizer.
using RescoreHook =
    std::function<std::string(const EvalRecord&, const RetrievalResult&)>;

// A stand-in for a biased second pass: every hypothesis window whose
// per-token pronunciation equals a retrieved hotword's is rewritten to the
// hotword, best-ranked first. Keeps references to `bank` and `lexicon`.
RescoreHook PhoneticRescorer(const HotwordBank& bank, const Lexicon& lexicon);

struct SweepOptions {
  std::vector<int> n_list = {1, 3, 10, 50};
  int threads = 1;
  RescoreHook rescore;
};

struct SweepResult {
  std::vector<MetricsReport> rows;  // one per n, in n_list order
  // Top-max(n) retrievals, one per record.
  std::vector<RetrievalResult> retrievals;
};

// Retrieves once per record at the largest n and reads smaller n as
// prefixes. With a rescore hook, each row also carries MER and the post
// metrics of the rescored transcripts.
SweepResult EvaluateSweep(const ScorerModel& model, const PhonemeVocab& vocab,
                          const HotwordBank& bank, const Lexicon& lexicon,
                          std::span<const EvalRecord> records,
                          const SweepOptions& options);

// The metric rows for precomputed top-max(n) retrievals, one per record.
SweepResult SweepFromRetrievals(const HotwordBank& bank,
                                std::span<const EvalRecord> records,
                                std::vector<RetrievalResult> retrievals,
                                const SweepOptions& options);

// The same sweep for the text edit-distance baseline.
SweepResult EvaluateBaselineSweep(const HotwordBank& bank,
                                  std::span<const EvalRecord> records,
                                  const SweepOptions& options);

// Rows are N; columns PrRR, plus PRR, PF1 and MER when rescored.
std::string SweepTsv(const SweepResult& result);
// Summary with counts, for reports.
std::string SweepJson(const SweepResult& result);

struct ScalingPoint {
  int size = 0;
  Rate prrr;
};

// Bank of each size = core followed by the first (size - |core|) entries of
// the seed-shuffled distractor pool, so larger banks contain smaller ones.
// Every record is scored once against the largest bank. Throws kBadInput if a
// size is below the core size or the pool shares a hotword with the records,
// and kInsufficientDistractors when the pool is too small.
std::vector<ScalingPoint> ScalingCurve(const ScorerModel& model,
                                       const PhonemeVocab& vocab,
                                       const Lexicon& lexicon,
                                       std::span<const std::string> core,
                                       std::span<const std::string> distractor_pool,
                                       std::span<const int> sizes,
                                       std::span<const EvalRecord> records,
                                       int n, uint64_t seed, int threads = 1);

std::string ScalingTsv(std::span<const ScalingPoint> curve, int n);

}  // namespace hprm

#endif  // HPRM_EVALUATION_H_
