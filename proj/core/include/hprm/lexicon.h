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

#ifndef HPRM_LEXICON_H_
#define HPRM_LEXICON_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hprm/text_normalizer.h"

namespace hprm {

enum class Lang { kZh, kEn };

struct Phoneme {
  std::string symbol;
  Lang lang = Lang::kZh;

  bool operator==(const Phoneme&) const = default;
};

struct PhonemeSequence {
  std::vector<Phoneme> phonemes;
  // For each phoneme, the index of the token it came from in `tokens`.
  std::vector<int> source_token_spans;
  std::vector<Token> tokens;

  size_t size() const { return phonemes.size(); }
  bool empty() const { return phonemes.empty(); }
};

struct Confusion {
  std::string target;
  double weight = 0.0;
};

// Pronunciation data: Han character -> tone-stripped pinyin, English word ->
// phones, and phoneme confusion lists. Immutable once loaded.
//
// File format (UTF-8 TSV, '#' starts a comment line):
//   zh<TAB>北<TAB>bei
//   en<TAB>whisper<TAB>w ih s p er
//   conf<TAB>zh<TAB>z:0.6,j:0.4
// The first entry for a character or word wins.
class Lexicon {
 public:
  static Lexicon Parse(std::string_view content);
  static Lexicon Load(const std::filesystem::path& path);

  // Throws kIllegalSyllable for syllables SplitPinyin rejects.
  void AddZh(const std::string& han_char, const std::string& syllable);
  void AddEn(const std::string& word, std::vector<std::string> phones);
  // Weights must be positive and sum to one (1e-6 tolerance).
  void AddConfusions(const std::string& source, std::vector<Confusion> list);

  const std::string* ZhSyllable(std::string_view han_char) const;
  const std::vector<std::string>* EnPhones(std::string_view word) const;
  const std::vector<Confusion>* Confusions(std::string_view symbol) const;

  // Characters sharing a syllable, in lexicon order.
  const std::vector<std::string>& CharsWithSyllable(
      std::string_view syllable) const;

  const std::vector<std::string>& zh_chars() const { return zh_chars_; }
  const std::vector<std::string>& en_words() const { return en_words_; }

  // Every symbol reachable from the entries: initials and finals of the zh
  // entries, English phones, and the 26 letter fallbacks. Sorted, unique.
  std::vector<std::string> PhonemeInventory() const;

 private:
  std::unordered_map<std::string, std::string> zh_map_;
  std::unordered_map<std::string, std::vector<std::string>> en_map_;
  std::map<std::string, std::vector<Confusion>, std::less<>> confusions_;
  std::unordered_map<std::string, std::vector<std::string>> homophones_;
  std::vector<std::string> zh_chars_;
  std::vector<std::string> en_words_;
};

// Normalizes and tokenizes `text`, then maps Han characters through the
// lexicon (split into initial + final; zero-initial yields the final only)
// and Latin words through the English map, falling back to one phoneme per
// letter. Digits, other tokens and uncovered characters are skipped.
// Throws kEmptyPhonemeSequence when nothing converts.
PhonemeSequence ToPhonemes(std::string_view text, const Lexicon& lexicon);

}  // namespace hprm

#endif  // HPRM_LEXICON_H_
