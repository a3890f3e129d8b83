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

#include "hprm/asr_simulator.h"

#include <algorithm>

#include "hprm/error.h"
#include "hprm/metrics.h"
#include "hprm/text_normalizer.h"
#include "hprm/utf8.h"

namespace hprm {

namespace {

bool IsWordToken(const std::string& t) {
  if (t.empty()) return false;
  unsigned char c = static_cast<unsigned char>(t[0]);
  return c < 0x80 && c != ' ';
}

bool IsHanToken(const std::string& t) {
  std::u32string cps = DecodeUtf8(t);
  return cps.size() == 1 && IsHanChar(cps[0]);
}

std::string RandomChar(const Lexicon& lexicon, Rng& rng) {
  const auto& chars = lexicon.zh_chars();
  return chars[rng.Below(chars.size())];
}

std::string SubstituteWord(const std::string& word, const Lexicon& lexicon,
                           Rng& rng) {
  const auto& words = lexicon.en_words();
  if (!words.empty() && rng.Bernoulli(0.5)) {
    for (int tries = 0; tries < 8; ++tries) {
      const std::string& w = words[rng.Below(words.size())];
      if (w != word) return w;
    }
  }
  std::string out = word;
  size_t pos = rng.Below(out.size());
  char c;
  do {
    c = static_cast<char>('a' + rng.Below(26));
  } while (c == out[pos]);
  out[pos] = c;
  return out;
}

std::string SubstituteToken(const std::string& token, const Lexicon& lexicon,
                            double homophone_prob, Rng& rng) {
  if (IsHanToken(token)) {
    return SubstituteChar(token, lexicon, homophone_prob, rng);
  }
  if (IsWordToken(token)) return SubstituteWord(token, lexicon, rng);
  return RandomChar(lexicon, rng);
}

}  // namespace

std::string SubstituteChar(const std::string& han_char, const Lexicon& lexicon,
                           double homophone_prob, Rng& rng) {
  if (rng.Bernoulli(homophone_prob)) {
    if (const std::string* syl = lexicon.ZhSyllable(han_char)) {
      const auto& same = lexicon.CharsWithSyllable(*syl);
      if (same.size() > 1) {
        // Uniform over the other characters.
        size_t k = rng.Below(same.size() - 1);
        size_t self = std::find(same.begin(), same.end(), han_char) - same.begin();
        if (k >= self) ++k;
        return same[std::min(k, same.size() - 1)];
      }
    }
  }
  if (lexicon.zh_chars().size() < 2) return han_char;
  for (;;) {
    std::string c = RandomChar(lexicon, rng);
    if (c != han_char) return c;
  }
}

std::string JoinTokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0 && IsWordToken(tokens[i - 1]) && IsWordToken(tokens[i])) {
      out += ' ';
    }
    out += tokens[i];
  }
  return out;
}

SimulatedHypothesis SimulateAsrErrors(std::string_view reference,
                                      const Lexicon& lexicon, double lo,
                                      double hi, uint64_t seed,
                                      const SimulatorOptions& options,
                                      const std::vector<TokenSpan>& focus) {
  if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) {
    throw HprmError(ErrorCode::kBadInput, "MER range must satisfy 0 <= lo < hi <= 1");
  }
  std::vector<std::string> tokens;
  for (Token& t : NormalizeAndTokenize(reference)) tokens.push_back(std::move(t.surface));
  if (tokens.empty()) throw HprmError(ErrorCode::kBadInput, "empty reference");
  if (lexicon.zh_chars().empty()) {
    throw HprmError(ErrorCode::kBadInput, "lexicon has no characters");
  }

  std::vector<int> focus_of(tokens.size(), -1);
  for (size_t s = 0; s < focus.size(); ++s) {
    for (int i = std::max(0, focus[s].first);
         i < std::min<int>(focus[s].second, tokens.size()); ++i) {
      focus_of[i] = static_cast<int>(s);
    }
  }

  Rng rng(seed);
  double rate = options.edit_rate;
  const std::string ref_text = JoinTokens(tokens);
  for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
    std::vector<std::string> hyp_tokens = tokens;
    // Hotword spans first: swap characters for homophones.
    for (const TokenSpan& span : focus) {
      if (!rng.Bernoulli(options.focus_prob)) continue;
      std::vector<int> han;
      for (int i = std::max(0, span.first);
           i < std::min<int>(span.second, tokens.size()); ++i) {
        if (IsHanToken(tokens[i])) han.push_back(i);
      }
      if (han.empty()) continue;
      bool any = false;
      for (int i : han) {
        if (rng.Bernoulli(options.focus_char_rate)) {
          hyp_tokens[i] = SubstituteChar(tokens[i], lexicon, 1.0, rng);
          any = true;
        }
      }
      if (!any) {
        int i = han[rng.Below(han.size())];
        hyp_tokens[i] = SubstituteChar(tokens[i], lexicon, 1.0, rng);
      }
    }

    std::vector<std::string> out;
    out.reserve(tokens.size() + 4);
    for (size_t i = 0; i < hyp_tokens.size(); ++i) {
      if (focus_of[i] >= 0 || !rng.Bernoulli(rate)) {
        out.push_back(hyp_tokens[i]);
        continue;
      }
      double u = rng.Uniform();
      if (u < options.deletion_share) continue;
      if (u < options.deletion_share + options.insertion_share) {
        out.push_back(hyp_tokens[i]);
        out.push_back(RandomChar(lexicon, rng));
        continue;
      }
      out.push_back(
          SubstituteToken(hyp_tokens[i], lexicon, options.homophone_prob, rng));
    }
    std::string hyp = JoinTokens(out);
    double mer = Mer(ref_text, hyp);
    if (mer >= lo && mer <= hi) return {hyp, mer, attempt};
    if (mer < lo) {
      rate = std::min(1.0, rate * 1.25 + 0.01);
    } else {
      rate = std::max(0.005, rate * 0.8);
    }
  }
  throw HprmError(ErrorCode::kTargetUnreachable,
                  "no hypothesis in [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "] after " +
                      std::to_string(options.max_attempts) + " attempts");
}

}  // namespace hprm
