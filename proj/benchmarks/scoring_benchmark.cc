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

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "hprm/hotword_bank.h"
#include "hprm/lexicon.h"
#include "hprm/retriever.h"
#include "hprm/rng.h"
#include "hprm/scorer.h"
#include "hprm/scorer_model.h"

namespace hprm {
namespace {

void BM_ScorePairs(benchmark::State& state) {
  const int n = 512;
  const int text_len = static_cast<int>(state.range(0));
  ScorerModel model = InitModel(80, 1);
  Rng rng(7);
  std::vector<std::vector<int>> hs(n), ts(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < 6; ++k) hs[i].push_back(rng.Int(1, 79));
    for (int k = 0; k < text_len; ++k) ts[i].push_back(rng.Int(1, 79));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(ScorePairs(model, hs, ts, 1));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ScorePairs)->Arg(25)->Arg(40)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_RetrieveBank(benchmark::State& state) {
  Lexicon lexicon = Lexicon::Load(HPRM_DATA_DIR "/demo_lexicon.tsv");
  PhonemeVocab vocab = BuildVocab(lexicon);
  const auto& chars = lexicon.zh_chars();
  Rng rng(3);
  std::vector<std::string> words;
  for (int i = 0; i < state.range(0); ++i) {
    std::string w;
    for (int k = 0; k < 3; ++k) w += chars[rng.Below(chars.size())];
    words.push_back(w);
  }
  HotwordBank bank = BuildBank(words, lexicon, vocab);
  ScorerModel model = InitModel(vocab.size(), 1);
  model.vocab_hash = vocab.hash();
  Retriever retriever(model, vocab, bank, lexicon, 0);
  std::string text;
  for (int k = 0; k < 16; ++k) text += chars[rng.Below(chars.size())];
  for (auto _ : state) {
    benchmark::DoNotOptimize(retriever.TopN(text, 10));
  }
  state.SetItemsProcessed(state.iterations() * bank.size());
}
BENCHMARK(BM_RetrieveBank)->Arg(1000)->Arg(3800)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace hprm

BENCHMARK_MAIN();
