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

#include "hprm/retriever.h"

#include <algorithm>

#include "hprm/edit_distance.h"
#include "hprm/error.h"
#include "hprm/text_normalizer.h"

namespace hprm {

namespace {

bool RankedBefore(const ScoredPair& a, const ScoredPair& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.hotword_id < b.hotword_id;
}

std::vector<std::string> TokenSurfaces(std::string_view text) {
  std::vector<std::string> out;
  for (Token& t : NormalizeAndTokenize(text)) out.push_back(std::move(t.surface));
  return out;
}

}  // namespace

std::vector<ScoredPair> RankTopN(std::span<const double> scores,
                                 std::span<const HotwordEntry> entries, int n) {
  if (n < 1) throw HprmError(ErrorCode::kBadInput, "n must be >= 1");
  if (scores.size() != entries.size()) {
    throw HprmError(ErrorCode::kLengthMismatch, "scores and entries differ");
  }
  std::vector<ScoredPair> all(entries.size());
  for (size_t i = 0; i < entries.size(); ++i) {
    all[i] = {entries[i].id, scores[i]};
  }
  const size_t keep = std::min(all.size(), static_cast<size_t>(n));
  std::partial_sort(all.begin(), all.begin() + keep, all.end(), RankedBefore);
  all.resize(keep);
  return all;
}

Retriever::Retriever(const ScorerModel& model, const PhonemeVocab& vocab,
                     const HotwordBank& bank, const Lexicon& lexicon,
                     int threads)
    : model_(&model),
      vocab_(&vocab),
      bank_(&bank),
      lexicon_(&lexicon),
      threads_(threads) {
  if (bank.empty()) throw HprmError(ErrorCode::kEmptyBank, "empty bank");
  if (model.vocab_hash != vocab.hash() || bank.vocab_hash() != vocab.hash()) {
    throw HprmError(ErrorCode::kVocabMismatch,
                    "model, bank and lexicon vocabularies differ");
  }
}

std::vector<int> Retriever::EncodeText(std::string_view asr_text) const {
  try {
    return vocab_->Encode(ToPhonemes(asr_text, *lexicon_));
  } catch (const HprmError& e) {
    if (e.code() == ErrorCode::kEmptyPhonemeSequence) return {};
    throw;
  }
}

std::vector<double> Retriever::ScoreAll(std::span<const int> text_ids) const {
  return ScoreEntries(*model_, text_ids, bank_->entries(), threads_);
}

std::vector<ScoredPair> Retriever::TopNIds(std::span<const int> text_ids,
                                           int n) const {
  return RankTopN(ScoreAll(text_ids), bank_->entries(), n);
}

RetrievalResult Retriever::TopN(std::string_view asr_text, int n) const {
  if (n < 1) throw HprmError(ErrorCode::kBadInput, "n must be >= 1");
  RetrievalResult r;
  r.query_text = std::string(asr_text);
  r.topn = n;
  std::vector<int> ids = EncodeText(asr_text);
  if (ids.empty()) {
    r.empty_query = true;
    return r;
  }
  r.ranked = TopNIds(ids, n);
  return r;
}

RetrievalResult RetrieveTopN(const ScorerModel& model, const PhonemeVocab& vocab,
                             const HotwordBank& bank, const Lexicon& lexicon,
                             std::string_view asr_text, int n, int threads) {
  return Retriever(model, vocab, bank, lexicon, threads).TopN(asr_text, n);
}

double EditBaselineScore(std::string_view hotword, std::string_view text) {
  std::vector<std::string> h = TokenSurfaces(hotword);
  if (h.empty()) return 0.0;
  std::vector<std::string> t = TokenSurfaces(text);
  int d = WindowEditDistance<std::string>(h, t);
  return std::clamp(1.0 - static_cast<double>(d) / h.size(), 0.0, 1.0);
}

RetrievalResult RetrieveBaselineEdit(const HotwordBank& bank,
                                     std::string_view asr_text, int n) {
  if (n < 1) throw HprmError(ErrorCode::kBadInput, "n must be >= 1");
  if (bank.empty()) throw HprmError(ErrorCode::kEmptyBank, "empty bank");
  RetrievalResult r;
  r.query_text = std::string(asr_text);
  r.topn = n;
  std::vector<std::string> t = TokenSurfaces(asr_text);
  if (t.empty()) {
    r.empty_query = true;
    return r;
  }
  std::vector<double> scores(bank.size());
  for (size_t i = 0; i < bank.size(); ++i) {
    std::vector<std::string> h = TokenSurfaces(bank.entries()[i].surface);
    if (h.empty()) continue;
    int d = WindowEditDistance<std::string>(h, t);
    scores[i] = std::clamp(1.0 - static_cast<double>(d) / h.size(), 0.0, 1.0);
  }
  r.ranked = RankTopN(scores, bank.entries(), n);
  return r;
}

std::string FormatPrompt(std::span<const std::string> hotwords,
                         PromptStyle style) {
  std::string out;
  if (style == PromptStyle::kWhisper) {
    out = "今天演讲的主题是这个呃，";
    for (size_t i = 0; i < hotwords.size(); ++i) {
      if (i) out += "、";
      out += hotwords[i];
    }
    out += "。好，那我就继续讲。";
    return out;
  }
  out =
      "Audio1 <|BOS|><|AUDIO|><|EOS|>"
      "请对上述音频进行中文语音识别，重点关注热词列表[";
  for (size_t i = 0; i < hotwords.size(); ++i) {
    if (i) out += ", ";
    out += hotwords[i];
  }
  out +=
      "]，没有发现热词请直接输出完整的音频语音识别结果。"
      "请严格按照以下格式输出：{“音频内容”: 语音识别结果}";
  return out;
}

std::string FormatPrompt(const RetrievalResult& result, const HotwordBank& bank,
                         PromptStyle style) {
  std::vector<std::string> surfaces;
  surfaces.reserve(result.ranked.size());
  for (const ScoredPair& p : result.ranked) {
    surfaces.push_back(bank.ById(p.hotword_id).surface);
  }
  return FormatPrompt(surfaces, style);
}

}  // namespace hprm
