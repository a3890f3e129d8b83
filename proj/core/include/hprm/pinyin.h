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

#ifndef HPRM_PINYIN_H_
#define HPRM_PINYIN_H_

#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace hprm {

// The 23 standard initials, including y and w.
std::span<const std::string_view> PinyinInitials();
// Tone-stripped finals as they are spelled after an initial ("v" for ü).
std::span<const std::string_view> PinyinFinals();

bool IsPinyinInitial(std::string_view s);
bool IsPinyinFinal(std::string_view s);

// Splits a tone-stripped syllable into (initial, final). The initial is the
// longest inventory prefix that leaves a legal final; zero-initial syllables
// return ("", syllable). Throws HprmError(kIllegalSyllable) otherwise.
std::pair<std::string, std::string> SplitPinyin(std::string_view syllable);

}  // namespace hprm

#endif  // HPRM_PINYIN_H_
