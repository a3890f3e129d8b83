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

#ifndef HPRM_UTF8_H_
#define HPRM_UTF8_H_

#include <string>
#include <string_view>
#include <vector>

namespace hprm {

inline constexpr char32_t kReplacementChar = 0xFFFD;

// Decodes UTF-8; malformed sequences become U+FFFD, one per bad byte.
std::u32string DecodeUtf8(std::string_view text);

void AppendUtf8(char32_t cp, std::string* out);
std::string EncodeUtf8(std::u32string_view text);

// Splits a UTF-8 string into one string per code point.
std::vector<std::string> SplitUtf8Chars(std::string_view text);

bool IsHanChar(char32_t cp);

}  // namespace hprm

#endif  // HPRM_UTF8_H_
