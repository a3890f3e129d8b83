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

#include "hprm/lexicon.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "hprm/error.h"
#include "hprm/pinyin.h"

namespace hprm {

namespace {

std::vector<std::string> SplitOn(std::string_view s, char delim) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(delim, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> SplitWhitespace(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::string Trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Lexicon Lexicon::Parse(std::string_view content) {
  Lexicon lex;
  size_t line_no = 0;
  for (const std::string& raw : SplitOn(content, '\n')) {
    ++line_no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty() || line[0] == '#') continue;
    std::vector<std::string> fields = SplitOn(line, '\t');
    auto fail = [&](const std::string& why) {
      throw HprmError(ErrorCode::kBadLexicon,
                      "line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() != 3) fail("expected 3 tab-separated fields");
    const std::string kind = Trim(fields[0]);
    const std::string key = Trim(fields[1]);
    const std::string value = Trim(fields[2]);
    if (key.empty() || value.empty()) fail("empty field");
    if (kind == "zh") {
      try {
        lex.AddZh(key, value);
      } catch (const HprmError& e) {
        fail(e.what());
      }
    } else if (kind == "en") {
      std::vector<std::string> phones = SplitWhitespace(value);
      lex.AddEn(NormalizeText(key), std::move(phones));
    } else if (kind == "conf") {
      std::vector<Confusion> list;
      for (const std::string& item : SplitOn(value, ',')) {
        size_t colon = item.rfind(':');
        if (colon == std::string::npos) fail("confusion needs target:weight");
        Confusion c;
        c.target = Trim(item.substr(0, colon));
        try {
          c.weight = std::stod(item.substr(colon + 1));
        } catch (const std::exception&) {
          fail("bad confusion weight '" + item + "'");
        }
        list.push_back(std::move(c));
      }
      try {
        lex.AddConfusions(key, std::move(list));
      } catch (const HprmError& e) {
        fail(e.what());
      }
    } else {
      fail("unknown entry kind '" + kind + "'");
    }
  }
  return lex;
}

Lexicon Lexicon::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw HprmError(ErrorCode::kIo, "cannot open lexicon " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

void Lexicon::AddZh(const std::string& han_char, const std::string& syllable) {
  SplitPinyin(syllable);  // validates
  if (zh_map_.count(han_char)) return;
  zh_map_.emplace(han_char, syllable);
  zh_chars_.push_back(han_char);
  homophones_[syllable].push_back(han_char);
}

void Lexicon::AddEn(const std::string& word, std::vector<std::string> phones) {
  if (phones.empty() || word.empty() || en_map_.count(word)) return;
  en_map_.emplace(word, std::move(phones));
  en_words_.push_back(word);
}

void Lexicon::AddConfusions(const std::string& source,
                            std::vector<Confusion> list) {
  double sum = 0.0;
  for (const Confusion& c : list) {
    if (!(c.weight > 0.0) || c.target.empty()) {
      throw HprmError(ErrorCode::kBadLexicon,
                      "confusion weights must be positive for " + source);
    }
    sum += c.weight;
  }
  if (list.empty() || std::abs(sum - 1.0) > 1e-6) {
    throw HprmError(ErrorCode::kBadLexicon,
                    "confusion weights for " + source + " must sum to 1");
  }
  confusions_[source] = std::move(list);
}

const std::string* Lexicon::ZhSyllable(std::string_view han_char) const {
  auto it = zh_map_.find(std::string(han_char));
  return it == zh_map_.end() ? nullptr : &it->second;
}

const std::vector<std::string>* Lexicon::EnPhones(std::string_view word) const {
  auto it = en_map_.find(std::string(word));
  return it == en_map_.end() ? nullptr : &it->second;
}

const std::vector<Confusion>* Lexicon::Confusions(
    std::string_view symbol) const {
  auto it = confusions_.find(symbol);
  return it == confusions_.end() ? nullptr : &it->second;
}

const std::vector<std::string>& Lexicon::CharsWithSyllable(
    std::string_view syllable) const {
  static const std::vector<std::string> kNone;
  auto it = homophones_.find(std::string(syllable));
  return it == homophones_.end() ? kNone : it->second;
}

std::vector<std::string> Lexicon::PhonemeInventory() const {
  std::set<std::string> symbols;
  for (const auto& [ch, syl] : zh_map_) {
    auto [initial, final_part] = SplitPinyin(syl);
    if (!initial.empty()) symbols.insert(initial);
    symbols.insert(final_part);
  }
  for (const auto& [word, phones] : en_map_) {
    symbols.insert(phones.begin(), phones.end());
  }
  for (char c = 'a'; c <= 'z'; ++c) symbols.insert(std::string(1, c));
  return {symbols.begin(), symbols.end()};
}

PhonemeSequence ToPhonemes(std::string_view text, const Lexicon& lexicon) {
  PhonemeSequence seq;
  seq.tokens = NormalizeAndTokenize(text);
  for (size_t t = 0; t < seq.tokens.size(); ++t) {
    const Token& tok = seq.tokens[t];
    auto emit = [&](std::string symbol, Lang lang) {
      seq.phonemes.push_back({std::move(symbol), lang});
      seq.source_token_spans.push_back(static_cast<int>(t));
    };
    if (tok.kind == TokenKind::kHanChar) {
      const std::string* syl = lexicon.ZhSyllable(tok.surface);
      if (syl == nullptr) continue;
      auto [initial, final_part] = SplitPinyin(*syl);
      if (!initial.empty()) emit(std::move(initial), Lang::kZh);
      emit(std::move(final_part), Lang::kZh);
    } else if (tok.kind == TokenKind::kLatinWord) {
      if (const auto* phones = lexicon.EnPhones(tok.surface)) {
        for (const std::string& p : *phones) emit(p, Lang::kEn);
      } else {
        for (char c : tok.surface) {
          if (c >= 'a' && c <= 'z') emit(std::string(1, c), Lang::kEn);
        }
      }
    }
  }
  if (seq.phonemes.empty()) {
    throw HprmError(ErrorCode::kEmptyPhonemeSequence,
                    "no convertible token in '" + std::string(text) + "'");
  }
  return seq;
}

}  // namespace hprm
