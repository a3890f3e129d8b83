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

#ifndef HPRM_RETRIEVER_H_
#define HPRM_RETRIEVER_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hprm/hotword_bank.h"
#include "hprm/lexicon.h"
#include "hprm/scorer.h"
#include "hprm/scorer_model.h"

namespace hprm {

struct RetrievalResult {
  std::string query_text;
  // Sorted by (score desc, hotword_id asc); min(topn, bank size) entries.
  std::vector<ScoredPair> ranked;
  int topn = 0;
  // Set when the transcript produced no phonemes; `ranked` is then empty.
  bool empty_query = false;
};

// Keeps the n best (score desc, id asc) of `scores`, where scores[i] belongs
// to entries[i].
std::vector<ScoredPair> RankTopN(std::span<const double> scores,
                                 std::span<const HotwordEntry> entries, int n);

// Scores every bank entry against transcripts with one model.
class Retriever {
 public:
  // Throws kVocabMismatch unless model, vocab and bank agree.
  Retriever(const ScorerModel& model, const PhonemeVocab& vocab,
            const HotwordBank& bank, const Lexicon& lexicon, int threads = 1);

  RetrievalResult TopN(std::string_view asr_text, int n) const;
  // Same, from already-encoded transcript phonemes.
  std::vector<ScoredPair> TopNIds(std::span<const int> text_ids, int n) const;
  // Score of every entry, in bank entry order.
  std::vector<double> ScoreAll(std::span<const int> text_ids) const;
  // Phoneme ids of a transcript; empty when nothing converts.
  std::vector<int> EncodeText(std::string_view asr_text) const;

  const HotwordBank& bank() const { return *bank_; }

 private:
  const ScorerModel* model_;
  const PhonemeVocab* vocab_;
  const HotwordBank* bank_;
  const Lexicon* lexicon_;
  int threads_;
};

RetrievalResult RetrieveTopN(const ScorerModel& model, const PhonemeVocab& vocab,
                             const HotwordBank& bank, const Lexicon& lexicon,
                             std::string_view asr_text, int n, int threads = 1);

// 1 - (best window token edit distance / hotword token count), in [0, 1].
// Tokens are Han characters and Latin words after normalization.
double EditBaselineScore(std::string_view hotword, std::string_view text);

// Text-space baseline ranked like RetrieveTopN.
RetrievalResult RetrieveBaselineEdit(const HotwordBank& bank,
                                     std::string_view asr_text, int n);

enum class PromptStyle { kWhisper, kInstruct };

std::string FormatPrompt(std::span<const std::string> hotwords,
                         PromptStyle style);
// Uses the ranked surfaces in rank order.
std::string FormatPrompt(const RetrievalResult& result, const HotwordBank& bank,
                         PromptStyle style);

}  // namespace hprm

#endif  // HPRM_RETRIEVER_H_
