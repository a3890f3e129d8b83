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

#ifndef HPRM_CORPUS_H_
#define HPRM_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "hprm/asr_simulator.h"
#include "hprm/lexicon.h"
#include "hprm/metrics.h"
#include "hprm/rng.h"

namespace hprm {

struct CorpusRecord {
  std::string reference;
  std::vector<std::string> hotwords;
  std::optional<std::string> hypothesis;
  std::optional<double> mer;

  bool operator==(const CorpusRecord&) const = default;
};

// JSONL: one object per line with `reference`, `hotwords`, and optional
// `hypothesis` and `mer`. Throws kBadInput with the line number, including
// for hotwords that do not occur in the normalized reference.
std::vector<CorpusRecord> ParseCorpus(std::string_view jsonl);
std::string CorpusToJsonl(std::span<const CorpusRecord> records);
std::vector<CorpusRecord> ReadCorpus(const std::filesystem::path& path);
void WriteCorpus(const std::filesystem::path& path,
                 std::span<const CorpusRecord> records);

// JSONL with `reference`, `hypothesis` and `hotwords`.
std::vector<EvalRecord> ParseEvalSet(std::string_view jsonl);
std::string EvalSetToJsonl(std::span<const EvalRecord> records);
std::vector<EvalRecord> ReadEvalSet(const std::filesystem::path& path);
void WriteEvalSet(const std::filesystem::path& path,
                  std::span<const EvalRecord> records);

// Records without a hypothesis use the reference.
std::vector<EvalRecord> ToEvalRecords(std::span<const CorpusRecord> records);

// Token spans of the first occurrence of each hotword in the normalized
// reference; hotwords that cannot be located are skipped.
std::vector<TokenSpan> LocateHotwords(std::string_view reference,
                                      std::span<const std::string> hotwords);

// Fills hypothesis and mer for every record. Record i uses a seed derived
// from (seed, i); hotword spans get the focus corruption of `options`. A
// record whose band cannot be reached keeps its reference as hypothesis
// (mer 0) and is logged.
void SimulateCorpus(std::vector<CorpusRecord>* records, const Lexicon& lexicon,
                    double lo, double hi, uint64_t seed,
                    const SimulatorOptions& options = {});

struct SyntheticCorpusOptions {
  int num_records = 2000;
  int num_hotwords = 500;   // ground-truth hotwords used by the records
  int bank_size = 1000;     // ground truth plus distractors
  int extra_distractors = 0;  // further distractors for scaling runs
  double english_fraction = 0.05;
  double two_hotword_fraction = 0.05;
  double mer_lo = 0.02;
  double mer_hi = 0.20;
  SimulatorOptions simulator = DefaultCorpusSimulator();
  uint64_t seed = 1;

  static SimulatorOptions DefaultCorpusSimulator() {
    SimulatorOptions o;
    o.focus_prob = 0.7;
    return o;
  }
};

struct SyntheticCorpus {
  std::vector<std::string> ground_truth;  // hotwords that occur in records
  std::vector<std::string> bank;          // ground truth, then distractors
  std::vector<std::string> extra_distractors;
  std::vector<CorpusRecord> records;      // with simulated hypotheses
};

// Surfaces and pronunciations already taken.
struct HotwordRegistry {
  std::unordered_set<std::string> surfaces;
  std::unordered_set<std::string> pronunciations;
};

// Random 2-4 character Han hotwords (and a share of English words) whose
// surfaces and phoneme sequences are new to `registry`; both are added.
std::vector<std::string> GenerateHotwords(const Lexicon& lexicon, int count,
                                          double english_fraction, Rng& rng,
                                          HotwordRegistry* registry);

// Templated carrier sentences around ground-truth hotwords, every ground-truth
// hotword used at least once when num_records allows. Deterministic in seed.
SyntheticCorpus GenerateSyntheticCorpus(const Lexicon& lexicon,
                                        const SyntheticCorpusOptions& options);

// Seeded split; the first result holds round(train_fraction * size) records.
std::pair<std::vector<CorpusRecord>, std::vector<CorpusRecord>> SplitCorpus(
    std::span<const CorpusRecord> records, double train_fraction, uint64_t seed);

}  // namespace hprm

#endif  // HPRM_CORPUS_H_
