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

#include <gtest/gtest.h>

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "hprm/asr_simulator.h"
#include "hprm/corpus.h"
#include "hprm/error.h"
#include "hprm/lexicon.h"
#include "hprm/metrics.h"
#include "hprm/text_normalizer.h"

namespace hprm {
namespace {

const Lexicon& Demo() {
  static const Lexicon lex = Lexicon::Load(HPRM_DATA_DIR "/demo_lexicon.tsv");
  return lex;
}

std::string Key(const std::string& word) {
  std::string k;
  for (const Phoneme& p : ToPhonemes(word, Demo()).phonemes) k += p.symbol + " ";
  return k;
}

TEST(Simulator, HitsTheRequestedBand) {
  const std::string ref = "今天我们在北京开会讨论下一步的工作安排";
  for (uint64_t seed = 1; seed <= 50; ++seed) {
    SimulatedHypothesis h = SimulateAsrErrors(ref, Demo(), 0.02, 0.20, seed);
    EXPECT_GE(h.mer, 0.02);
    EXPECT_LE(h.mer, 0.20);
    EXPECT_EQ(h.mer, Mer(ref, h.text));
    EXPECT_GE(h.attempts, 1);
  }
}

TEST(Simulator, Deterministic) {
  const std::string ref = "我用whisper识别北京的会议录音";
  SimulatedHypothesis a = SimulateAsrErrors(ref, Demo(), 0.05, 0.3, 77);
  SimulatedHypothesis b = SimulateAsrErrors(ref, Demo(), 0.05, 0.3, 77);
  EXPECT_EQ(a.text, b.text);
  EXPECT_EQ(a.mer, b.mer);
}

TEST(Simulator, FocusedSpansAreHomophoneSwaps) {
  const std::string ref = "我们明天去北京出差然后回来";
  std::vector<Token> toks = NormalizeAndTokenize(ref);
  SimulatorOptions o;
  o.focus_prob = 1.0;
  o.edit_rate = 0.0;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    SimulatedHypothesis h =
        SimulateAsrErrors(ref, Demo(), 0.05, 0.2, seed, o, {{5, 7}});
    std::vector<Token> ht = NormalizeAndTokenize(h.text);
    ASSERT_EQ(ht.size(), toks.size());
    int changed = 0;
    for (size_t i = 0; i < toks.size(); ++i) {
      if (ht[i].surface == toks[i].surface) continue;
      ++changed;
      EXPECT_TRUE(i == 5 || i == 6) << h.text;
      EXPECT_EQ(*Demo().ZhSyllable(ht[i].surface), *Demo().ZhSyllable(toks[i].surface));
    }
    EXPECT_GE(changed, 1);
  }
}

TEST(Simulator, Errors) {
  EXPECT_THROW(SimulateAsrErrors("北京", Demo(), 0.3, 0.2, 1), HprmError);
  EXPECT_THROW(SimulateAsrErrors("北京", Demo(), 0.1, 1.5, 1), HprmError);
  EXPECT_THROW(SimulateAsrErrors("，。", Demo(), 0.1, 0.2, 1), HprmError);
  SimulatorOptions o;
  o.max_attempts = 3;
  try {
    // One token can only move MER in steps of 1.
    SimulateAsrErrors("北", Demo(), 0.3, 0.6, 1, o);
    FAIL();
  } catch (const HprmError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTargetUnreachable);
  }
}

TEST(Simulator, SubstituteCharPrefersHomophones) {
  Rng rng(3);
  for (const std::string& c : Demo().zh_chars()) {
    std::string s = SubstituteChar(c, Demo(), 1.0, rng);
    EXPECT_NE(s, c);
    // Characters without a homophone fall back to a random one.
    if (Demo().CharsWithSyllable(*Demo().ZhSyllable(c)).size() > 1) {
      EXPECT_EQ(*Demo().ZhSyllable(s), *Demo().ZhSyllable(c));
    }
  }
}

TEST(Corpus, JsonlRoundTrip) {
  std::vector<CorpusRecord> recs(3);
  recs[0] = {"我在北京", {"北京"}, std::nullopt, std::nullopt};
  recs[1] = {"用Whisper识别", {"whisper"}, "用wispel识别", 0.25};
  recs[2] = {"没有热词的句子", {}, "没有热词的句子", 0.0};
  std::string text = CorpusToJsonl(recs);
  EXPECT_EQ(ParseCorpus(text), recs);
  EXPECT_EQ(CorpusToJsonl(ParseCorpus(text)), text);
  auto path = std::filesystem::temp_directory_path() / "hprm_corpus_rt.jsonl";
  WriteCorpus(path, recs);
  EXPECT_EQ(ReadCorpus(path), recs);
  std::filesystem::remove(path);
}

TEST(Corpus, ParseErrorsNameTheLine) {
  auto code_of = [](std::string_view s) {
    try {
      ParseCorpus(s);
    } catch (const HprmError& e) {
      return std::string(e.what());
    }
    return std::string("ok");
  };
  EXPECT_NE(code_of("{\"reference\":\"北京\",\"hotwords\":[]}\n{bad").find("line 2"),
            std::string::npos);
  EXPECT_NE(code_of("{\"reference\":\"北京\"}").find("BadInput"), std::string::npos);
  EXPECT_NE(code_of("{\"reference\":\"北京\",\"hotwords\":[\"上海\"]}").find("not in reference"),
            std::string::npos);
  EXPECT_NE(code_of("{\"reference\":\"北京\",\"hotwords\":[],\"mer\":-1}").find("negative"),
            std::string::npos);
  EXPECT_EQ(code_of("\n\n{\"reference\":\"北京\",\"hotwords\":[\"北京\"]}\n\n"), "ok");
  EXPECT_THROW(ReadCorpus("/nonexistent/x.jsonl"), HprmError);
}

TEST(Corpus, EvalSetRoundTrip) {
  std::vector<CorpusRecord> recs = {{"我在北京", {"北京"}, "我在背景", 0.5}};
  std::vector<EvalRecord> ev = ToEvalRecords(recs);
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].hypothesis, "我在背景");
  EXPECT_EQ(ParseEvalSet(EvalSetToJsonl(ev)), ev);
}

TEST(Corpus, LocateHotwordsGivesTokenSpans) {
  std::vector<std::string> hw = {"北京", "whisper"};
  std::vector<TokenSpan> spans = LocateHotwords("我用Whisper听北京", hw);
  ASSERT_EQ(spans.size(), 2u);
  EXPECT_EQ(spans[0], TokenSpan(4, 6));
  EXPECT_EQ(spans[1], TokenSpan(2, 3));
}

TEST(Corpus, SplitIsAPartition) {
  std::vector<CorpusRecord> recs;
  for (int i = 0; i < 101; ++i) recs.push_back({"句" + std::to_string(i), {}, {}, {}});
  auto [train, held] = SplitCorpus(recs, 0.8, 5);
  EXPECT_EQ(train.size(), 81u);
  EXPECT_EQ(held.size(), 20u);
  std::set<std::string> seen;
  for (auto& r : train) seen.insert(r.reference);
  for (auto& r : held) EXPECT_TRUE(seen.insert(r.reference).second);
  EXPECT_EQ(seen.size(), 101u);
  auto again = SplitCorpus(recs, 0.8, 5);
  EXPECT_EQ(again.first, train);
  EXPECT_NE(SplitCorpus(recs, 0.8, 6).first, train);
}

SyntheticCorpusOptions Small(uint64_t seed) {
  SyntheticCorpusOptions o;
  o.num_records = 200;
  o.num_hotwords = 50;
  o.bank_size = 100;
  o.extra_distractors = 40;
  o.two_hotword_fraction = 0.2;
  o.seed = seed;
  return o;
}

TEST(Synthetic, Invariants) {
  SyntheticCorpus c = GenerateSyntheticCorpus(Demo(), Small(11));
  ASSERT_EQ(c.ground_truth.size(), 50u);
  ASSERT_EQ(c.bank.size(), 100u);
  ASSERT_EQ(c.extra_distractors.size(), 40u);
  ASSERT_EQ(c.records.size(), 200u);
  std::set<std::string> surfaces, keys;
  for (auto* list : {&c.bank, &c.extra_distractors}) {
    for (const std::string& w : *list) {
      EXPECT_TRUE(surfaces.insert(w).second) << w;
      EXPECT_TRUE(keys.insert(Key(w)).second) << w;
    }
  }
  for (size_t i = 0; i < c.ground_truth.size(); ++i) EXPECT_EQ(c.bank[i], c.ground_truth[i]);
  std::set<std::string> gt(c.ground_truth.begin(), c.ground_truth.end()), used;
  int two = 0;
  for (const CorpusRecord& r : c.records) {
    ASSERT_TRUE(r.hypothesis && r.mer);
    EXPECT_GE(*r.mer, 0.02);
    EXPECT_LE(*r.mer, 0.20);
    EXPECT_EQ(*r.mer, Mer(r.reference, *r.hypothesis));
    ASSERT_GE(r.hotwords.size(), 1u);
    two += r.hotwords.size() == 2;
    for (const std::string& h : r.hotwords) {
      EXPECT_TRUE(gt.count(h));
      EXPECT_NE(NormalizeText(r.reference).find(NormalizeText(h)), std::string::npos);
      used.insert(h);
    }
  }
  EXPECT_EQ(used, gt);
  EXPECT_GT(two, 10);
  EXPECT_LT(two, 80);
}

TEST(Synthetic, DeterministicPerSeed) {
  SyntheticCorpus a = GenerateSyntheticCorpus(Demo(), Small(3));
  SyntheticCorpus b = GenerateSyntheticCorpus(Demo(), Small(3));
  EXPECT_EQ(a.bank, b.bank);
  EXPECT_EQ(a.extra_distractors, b.extra_distractors);
  EXPECT_EQ(CorpusToJsonl(a.records), CorpusToJsonl(b.records));
  SyntheticCorpus c = GenerateSyntheticCorpus(Demo(), Small(4));
  EXPECT_NE(CorpusToJsonl(a.records), CorpusToJsonl(c.records));
}

TEST(Synthetic, RejectsInconsistentSizes) {
  SyntheticCorpusOptions o = Small(1);
  o.bank_size = 10;
  EXPECT_THROW(GenerateSyntheticCorpus(Demo(), o), HprmError);
  o = Small(1);
  o.num_records = 0;
  EXPECT_THROW(GenerateSyntheticCorpus(Demo(), o), HprmError);
}

}  // namespace
}  // namespace hprm
