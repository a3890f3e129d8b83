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

#ifndef HPRM_ASR_SIMULATOR_H_
#define HPRM_ASR_SIMULATOR_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hprm/lexicon.h"
#include "hprm/rng.h"

namespace hprm {

struct SimulatorOptions {
  // Share of substitutions that pick a same-syllable character.
  double homophone_prob = 0.7;
  // Per-token edit probability of the first attempt.
  double edit_rate = 0.06;
  // Of the edits, the share that delete or insert instead of substituting.
  double deletion_share = 0.1;
  double insertion_share = 0.1;
  int max_attempts = 200;
  // Per hotword span: probability that the span is misrecognized, and the
  // per-character homophone swap rate when it is (at least one swap).
  double focus_prob = 0.0;
  double focus_char_rate = 0.4;
};

struct SimulatedHypothesis {
  std::string text;
  double mer = 0.0;
  int attempts = 0;
};

// Half-open token range [first, second) of the normalized reference.
using TokenSpan = std::pair<int, int>;

// Applies random token edits to `reference` until its MER lies in [lo, hi].
// Substitutions favour homophones; deletions and insertions are rarer. The
// edit rate rises after attempts that land below the band and falls after
// ones above it. `focus` marks hotword spans that get extra homophone
// corruption. Deterministic in `seed`. Throws kBadInput for an invalid range
// or empty reference and kTargetUnreachable after max_attempts.
SimulatedHypothesis SimulateAsrErrors(std::string_view reference,
                                      const Lexicon& lexicon, double lo,
                                      double hi, uint64_t seed,
                                      const SimulatorOptions& options = {},
                                      const std::vector<TokenSpan>& focus = {});

// A character with the same syllable as `han_char`, or a random one when
// none exists or the coin says so; never `han_char` itself unless the
// lexicon has nothing else.
std::string SubstituteChar(const std::string& han_char, const Lexicon& lexicon,
                           double homophone_prob, Rng& rng);

// Joins tokens the way the tokenizer splits them: a space only between two
// adjacent Latin or digit tokens.
std::string JoinTokens(const std::vector<std::string>& tokens);

}  // namespace hprm

#endif  // HPRM_ASR_SIMULATOR_H_
