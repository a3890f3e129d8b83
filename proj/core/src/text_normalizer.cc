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

#include "hprm/text_normalizer.h"

#include "hprm/utf8.h"

namespace hprm {

namespace {

constexpr char32_t kSep = U' ';

bool IsLatin(char32_t cp) {
  return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z');
}

bool IsDigit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

char32_t FoldWidth(char32_t cp) {
  if (cp >= 0xFF01 && cp <= 0xFF5E) return cp - 0xFEE0;
  if (cp == 0x3000) return kSep;
  if (cp == 0x2019 || cp == 0x2018) return U'\'';
  return cp;
}

// Whitespace, ASCII punctuation (apostrophe handled by the caller) and the
// common Unicode punctuation blocks.
bool IsSeparator(char32_t cp) {
  if (cp <= 0x20 || cp == 0x7F) return true;
  if (cp < 0x80) return !IsLatin(cp) && !IsDigit(cp) && cp != U'\'';
  if (cp >= 0x80 && cp <= 0xBF) return true;       // Latin-1 punct, NBSP
  if (cp == 0xD7 || cp == 0xF7) return true;       // × ÷
  if (cp >= 0x2000 && cp <= 0x206F) return true;   // general punctuation
  if (cp >= 0x2E00 && cp <= 0x2E7F) return true;   // supplemental punct
  if (cp >= 0x3000 && cp <= 0x303F) return true;   // CJK punct
  if (cp >= 0xFE10 && cp <= 0xFE1F) return true;   // vertical forms
  if (cp >= 0xFE30 && cp <= 0xFE6F) return true;   // compat/small forms
  if (cp >= 0xFF5F && cp <= 0xFF65) return true;   // half-width punct
  if (cp == 0x30FB) return true;                   // katakana middle dot
  if (cp == kReplacementChar) return true;
  return false;
}

}  // namespace

std::string NormalizeText(std::string_view raw) {
  std::u32string in = DecodeUtf8(raw);
  for (char32_t& cp : in) {
    cp = FoldWidth(cp);
    if (cp >= U'A' && cp <= U'Z') cp = cp - U'A' + U'a';
  }
  std::u32string out;
  out.reserve(in.size());
  bool pending_sep = false;
  for (size_t i = 0; i < in.size(); ++i) {
    char32_t cp = in[i];
    bool sep;
    if (cp == U'\'') {
      sep = !(i > 0 && IsLatin(in[i - 1]) && i + 1 < in.size() &&
              IsLatin(in[i + 1]));
    } else {
      sep = IsSeparator(cp);
    }
    if (sep) {
      pending_sep = !out.empty();
      continue;
    }
    if (pending_sep) out.push_back(kSep);
    pending_sep = false;
    out.push_back(cp);
  }
  return EncodeUtf8(out);
}

std::vector<Token> TokenizeMixed(std::string_view text) {
  std::u32string cps = DecodeUtf8(text);
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < cps.size()) {
    char32_t cp = cps[i];
    if (cp == kSep || cp == U'\t' || cp == U'\n' || cp == U'\r') {
      ++i;
      continue;
    }
    Token tok;
    size_t j = i + 1;
    if (IsHanChar(cp)) {
      tok.kind = TokenKind::kHanChar;
    } else if (IsLatin(cp) || cp == U'\'') {
      tok.kind = TokenKind::kLatinWord;
      while (j < cps.size() && (IsLatin(cps[j]) || cps[j] == U'\'')) ++j;
    } else if (IsDigit(cp)) {
      tok.kind = TokenKind::kDigit;
      while (j < cps.size() && IsDigit(cps[j])) ++j;
    } else {
      tok.kind = TokenKind::kOther;
      while (j < cps.size() && cps[j] != kSep && !IsHanChar(cps[j]) &&
             !IsLatin(cps[j]) && cps[j] != U'\'' && !IsDigit(cps[j])) {
        ++j;
      }
    }
    tok.surface = EncodeUtf8(std::u32string_view(cps).substr(i, j - i));
    tokens.push_back(std::move(tok));
    i = j;
  }
  return tokens;
}

std::vector<Token> NormalizeAndTokenize(std::string_view raw) {
  return TokenizeMixed(NormalizeText(raw));
}

}  // namespace hprm
