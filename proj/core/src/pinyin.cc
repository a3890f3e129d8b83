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

#include "hprm/pinyin.h"

#include <algorithm>
#include <array>

#include "hprm/error.h"

namespace hprm {

namespace {

constexpr std::array<std::string_view, 23> kInitials = {
    "b", "p", "m", "f", "d", "t", "n", "l", "g", "k", "h", "j",
    "q", "x", "zh", "ch", "sh", "r", "z", "c", "s", "y", "w"};

constexpr std::array<std::string_view, 42> kFinals = {
    "a",   "o",    "e",    "i",    "u",   "v",    "ai",  "ei",  "ui",
    "ao",  "ou",   "iu",   "ie",   "ve",  "ue",   "er",  "an",  "en",
    "in",  "un",   "vn",   "ang",  "eng", "ing",  "ong", "ia",  "iao",
    "ian", "iang", "iong", "ua",   "uo",  "uai",  "uan", "van", "uang",
    "io",  "ueng", "uen",  "m",    "n",   "ng"};

}  // namespace

std::span<const std::string_view> PinyinInitials() { return kInitials; }
std::span<const std::string_view> PinyinFinals() { return kFinals; }

bool IsPinyinInitial(std::string_view s) {
  return std::find(kInitials.begin(), kInitials.end(), s) != kInitials.end();
}

bool IsPinyinFinal(std::string_view s) {
  return std::find(kFinals.begin(), kFinals.end(), s) != kFinals.end();
}

std::pair<std::string, std::string> SplitPinyin(std::string_view syllable) {
  // Initials are at most two letters.
  for (size_t len = std::min<size_t>(2, syllable.size()); len >= 1; --len) {
    std::string_view head = syllable.substr(0, len);
    std::string_view rest = syllable.substr(len);
    if (IsPinyinInitial(head) && IsPinyinFinal(rest)) {
      return {std::string(head), std::string(rest)};
    }
  }
  if (IsPinyinFinal(syllable)) return {"", std::string(syllable)};
  throw HprmError(ErrorCode::kIllegalSyllable,
                  "'" + std::string(syllable) + "' is not a pinyin syllable");
}

}  // namespace hprm
