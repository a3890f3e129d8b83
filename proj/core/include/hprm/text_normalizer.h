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

#ifndef HPRM_TEXT_NORMALIZER_H_
#define HPRM_TEXT_NORMALIZER_H_

#include <string>
#include <string_view>
#include <vector>

namespace hprm {

enum class TokenKind { kHanChar, kLatinWord, kDigit, kOther };

// A scoring unit for mixed Chinese/English text: one Han character, one
// maximal run of [A-Za-z'], one run of digits, or one run of anything else.
struct Token {
  std::string surface;
  TokenKind kind = TokenKind::kOther;

  bool operator==(const Token&) const = default;
};

// Folds full-width ASCII to half-width, lowercases Latin, and collapses runs
// of whitespace/punctuation into a single ' '. The result has no leading or
// trailing separator. Apostrophes survive only between two Latin letters.
// Idempotent.
std::string NormalizeText(std::string_view raw);

// Splits text into tokens. Expects normalized input but tolerates anything.
std::vector<Token> TokenizeMixed(std::string_view text);

// NormalizeText followed by TokenizeMixed.
std::vector<Token> NormalizeAndTokenize(std::string_view raw);

}  // namespace hprm

#endif  // HPRM_TEXT_NORMALIZER_H_
