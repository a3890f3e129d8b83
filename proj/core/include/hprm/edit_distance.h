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

#ifndef HPRM_EDIT_DISTANCE_H_
#define HPRM_EDIT_DISTANCE_H_

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

namespace hprm {

// Unit-cost Levenshtein distance between two token sequences.
template <typename T, typename Eq = std::equal_to<>>
int EditDistance(std::span<const T> a, std::span<const T> b, Eq eq = {}) {
  std::vector<int> row(b.size() + 1);
  std::iota(row.begin(), row.end(), 0);
  for (size_t i = 1; i <= a.size(); ++i) {
    int diag = row[0];
    row[0] = static_cast<int>(i);
    for (size_t j = 1; j <= b.size(); ++j) {
      int up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1,
                         diag + (eq(a[i - 1], b[j - 1]) ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

// Smallest edit distance between `pattern` and any contiguous window of
// `text` (the empty window included).
template <typename T, typename Eq = std::equal_to<>>
int WindowEditDistance(std::span<const T> pattern, std::span<const T> text,
                       Eq eq = {}) {
  std::vector<int> col(pattern.size() + 1);
  std::iota(col.begin(), col.end(), 0);
  int best = col.back();
  for (size_t j = 1; j <= text.size(); ++j) {
    int diag = col[0];
    col[0] = 0;
    for (size_t i = 1; i <= pattern.size(); ++i) {
      int left = col[i];
      col[i] = std::min({left + 1, col[i - 1] + 1,
                         diag + (eq(pattern[i - 1], text[j - 1]) ? 0 : 1)});
      diag = left;
    }
    best = std::min(best, col.back());
  }
  return best;
}

}  // namespace hprm

#endif  // HPRM_EDIT_DISTANCE_H_
