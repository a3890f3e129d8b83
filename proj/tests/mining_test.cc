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

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hprm/corpus.h"
#include "hprm/error.h"
#include "hprm/hotword_bank.h"
#include "hprm/lexicon.h"
#include "hprm/metrics.h"
#include "hprm/mining.h"
#include "hprm/scorer_model.h"

namespace hprm {
namespace {

const Lexicon& Demo() {
  static const Lexicon lex = Lexicon::Load(HPRM_DATA_DIR "/demo_lexicon.tsv");
  return lex;
}

const PhonemeVocab& Vocab() {
  static const PhonemeVocab v = BuildVocab(Demo());
  return v;
}

struct Fixture {
  SyntheticCorpus corpus;
  HotwordBank bank;
};

const Fixture& Tiny() {
  static const Fixture f = [] {
    SyntheticCorpusOptions o;
    o.num_records = 120;
    o.num_hotwords = 30;
    o.bank_size = 60;
    o.two_hotword_fraction = 0.2;
    o.seed = 8;
    Fixture x;
    x.corpus = GenerateSyntheticCorpus(Demo(), o);
    x.bank = BuildBank(x.corpus.bank, Demo(), Vocab());
    return x;
  }();
  return f;
}

TEST(InitialPairs, PositivesInBandAndNegativesNeverTruth) {
  const Fixture& f = Tiny();
  InitialPairOptions o;
  std::vector<TrainingPair> pairs = BuildInitialPairs(f.corpus.records, f.bank, o);
  size_t positives = 0, expected_pos = 0;
  for (const CorpusRecord& r : f.corpus.records) expected_pos += r.hotwords.size();
  std::map<std::string, std::set<std::string>> truth;
  for (const CorpusRecord& r : f.corpus.records) {
    for (const std::string& h : r.hotwords) truth[*r.hypothesis].insert(h);
  }
  for (const TrainingPair& p : pairs) {
    EXPECT_EQ(p.stage, PairStage::kInitial);
    ASSERT_GE(p.hotword_id, 0);
    EXPECT_EQ(p.hotword, f.bank.ById(p.hotword_id).surface);
    if (p.label == 1) {
      ++positives;
      EXPECT_TRUE(truth[p.text].count(p.hotword));
    } else {
      EXPECT_FALSE(truth[p.text].count(p.hotword)) << p.hotword;
    }
  }
  EXPECT_EQ(positives, expected_pos);
  EXPECT_EQ(pairs.size(), 4 * expected_pos);
  for (const CorpusRecord& r : f.corpus.records) {
    double m = Mer(r.reference, *r.hypothesis);
    EXPECT_GE(m, 0.02);
    EXPECT_LE(m, 0.20);
  }
}

TEST(InitialPairs, SkipsRecordsOutsideTheBand) {
  const Fixture& f = Tiny();
  std::vector<CorpusRecord> recs = {f.corpus.records[0], f.corpus.records[1]};
  recs[1].hypothesis = recs[1].reference;  // MER 0
  recs.push_back({recs[0].reference, recs[0].hotwords, std::nullopt, std::nullopt});
  std::vector<TrainingPair> pairs = BuildInitialPairs(recs, f.bank, {});
  for (const TrainingPair& p : pairs) EXPECT_EQ(p.text, *recs[0].hypothesis);
  EXPECT_EQ(pairs.size(), 4 * recs[0].hotwords.size());
}

TEST(InitialPairs, Reproducible) {
  const Fixture& f = Tiny();
  InitialPairOptions o;
  o.seed = 4;
  EXPECT_EQ(BuildInitialPairs(f.corpus.records, f.bank, o),
            BuildInitialPairs(f.corpus.records, f.bank, o));
}

TEST(MineFromRankings, TakesTheBestWrongCandidate) {
  const Fixture& f = Tiny();
  std::vector<CorpusRecord> recs = {f.corpus.records[0]};
  const int truth = f.bank.FindId(recs[0].hotwords[0]);
  const int other = truth == 0 ? 1 : 0;
  const int third = truth == 2 ? 3 : 2;
  recs[0].hotwords.resize(1);

  std::vector<std::array<int, 2>> top = {{truth, other}};
  std::vector<TrainingPair> mined = MineFromRankings(recs, f.bank, top);
  ASSERT_EQ(mined.size(), 1u);
  EXPECT_EQ(mined[0].hotword_id, other);
  EXPECT_EQ(mined[0].label, 0);
  EXPECT_EQ(mined[0].stage, PairStage::kMinedNegative);
  EXPECT_EQ(mined[0].text, *recs[0].hypothesis);

  top = {{third, other}};
  mined = MineFromRankings(recs, f.bank, top);
  ASSERT_EQ(mined.size(), 1u);
  EXPECT_EQ(mined[0].hotword_id, third);

  top = {{truth, -1}};
  EXPECT_TRUE(MineFromRankings(recs, f.bank, top).empty());

  std::vector<std::array<int, 2>> wrong_len;
  EXPECT_THROW(MineFromRankings(recs, f.bank, wrong_len), HprmError);
}

TEST(MineFromRankings, NeverEmitsGroundTruth) {
  const Fixture& f = Tiny();
  Rng rng(12);
  std::vector<std::array<int, 2>> top;
  for (size_t i = 0; i < f.corpus.records.size(); ++i) {
    top.push_back({static_cast<int>(rng.Below(f.bank.size())),
                   static_cast<int>(rng.Below(f.bank.size()))});
  }
  for (const TrainingPair& p : MineFromRankings(f.corpus.records, f.bank, top)) {
    bool is_truth = false;
    for (const CorpusRecord& r : f.corpus.records) {
      if (*r.hypothesis != p.text) continue;
      for (const std::string& h : r.hotwords) is_truth |= f.bank.FindId(h) == p.hotword_id;
    }
    EXPECT_FALSE(is_truth);
  }
}

TEST(MineNegatives, UsesTheModelRanking) {
  const Fixture& f = Tiny();
  ScorerModel model = InitModel(Vocab().size(), 5);
  model.vocab_hash = Vocab().hash();
  std::vector<TrainingPair> a =
      MineNegatives(model, Vocab(), f.bank, Demo(), f.corpus.records, 1);
  std::vector<TrainingPair> b =
      MineNegatives(model, Vocab(), f.bank, Demo(), f.corpus.records, 4);
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a.empty());
  for (const TrainingPair& p : a) EXPECT_EQ(p.label, 0);
}

TEST(Augment, VariantsAreConfusablePositives) {
  const Fixture& f = Tiny();
  std::vector<TrainingPair> aug = AugmentPositives(f.corpus.records, Demo(), 2, 3);
  EXPECT_FALSE(aug.empty());
  for (const TrainingPair& p : aug) {
    EXPECT_EQ(p.label, 1);
    EXPECT_EQ(p.hotword_id, -1);
    EXPECT_EQ(p.stage, PairStage::kAugmentedPositive);
    bool from_record = false;
    for (const CorpusRecord& r : f.corpus.records) {
      if (r.reference != p.text) continue;
      for (const std::string& h : r.hotwords) {
        from_record |= h.size() == p.hotword.size() && h != p.hotword;
      }
    }
    EXPECT_TRUE(from_record) << p.hotword;
  }
  EXPECT_EQ(aug, AugmentPositives(f.corpus.records, Demo(), 2, 3));
}

TEST(Augment, ConfusableCharsShareSyllableOrConfusedInitial) {
  for (const std::string& c : {"北", "京", "上", "张"}) {
    for (const std::string& x : ConfusableChars(c, Demo())) {
      EXPECT_NE(x, c);
      ASSERT_NE(Demo().ZhSyllable(x), nullptr);
    }
  }
  EXPECT_TRUE(ConfusableChars("x", Demo()).empty());
}

}  // namespace
}  // namespace hprm
