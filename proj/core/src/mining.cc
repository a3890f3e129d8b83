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

#include "hprm/mining.h"

#include <glog/logging.h>

#include <algorithm>
#include <set>
#include <unordered_set>

#include "hprm/error.h"
#include "hprm/metrics.h"
#include "hprm/parallel.h"
#include "hprm/pinyin.h"
#include "hprm/retriever.h"
#include "hprm/rng.h"
#include "hprm/text_normalizer.h"
#include "hprm/utf8.h"

namespace hprm {

const char* PairStageName(PairStage stage) {
  switch (stage) {
    case PairStage::kInitial:
      return "initial";
    case PairStage::kMinedNegative:
      return "mined_negative";
    case PairStage::kAugmentedPositive:
      return "augmented_positive";
  }
  return "unknown";
}

std::vector<TrainingPair> BuildInitialPairs(std::span<const CorpusRecord> records,
                                            const HotwordBank& bank,
                                            const InitialPairOptions& options) {
  Rng rng(Rng::Mix(options.seed, 0x696e6974ULL));
  std::vector<TrainingPair> pairs;
  int skipped = 0;
  for (size_t i = 0; i < records.size(); ++i) {
    const CorpusRecord& r = records[i];
    if (!r.hypothesis) {
      LOG(WARNING) << "record " << i << " has no hypothesis; skipped";
      ++skipped;
      continue;
    }
    const double mer = Mer(r.reference, *r.hypothesis);
    if (mer < options.mer_lo || mer > options.mer_hi) {
      LOG(WARNING) << "record " << i << " MER " << mer << " outside ["
                   << options.mer_lo << ", " << options.mer_hi << "]; skipped";
      ++skipped;
      continue;
    }
    std::unordered_set<int> truth_ids;
    for (const std::string& h : r.hotwords) {
      int id = bank.FindId(h);
      if (id >= 0) truth_ids.insert(id);
    }
    const int candidates =
        static_cast<int>(bank.size()) - static_cast<int>(truth_ids.size());
    for (const std::string& h : r.hotwords) {
      const int id = bank.FindId(h);
      pairs.push_back({id, id >= 0 ? bank.ById(id).surface : NormalizeText(h),
                       *r.hypothesis, 1, PairStage::kInitial});
      const int k = std::min(options.negatives_per_positive, candidates);
      std::set<int> chosen;
      while (static_cast<int>(chosen.size()) < k) {
        int neg = static_cast<int>(rng.Below(bank.size()));
        if (truth_ids.count(neg) || !chosen.insert(neg).second) continue;
        pairs.push_back({neg, bank.ById(neg).surface, *r.hypothesis, 0,
                         PairStage::kInitial});
      }
    }
  }
  if (skipped) LOG(WARNING) << skipped << " records outside the MER band";
  rng.Shuffle(pairs);
  return pairs;
}

std::vector<TrainingPair> MineFromRankings(
    std::span<const CorpusRecord> records, const HotwordBank& bank,
    std::span<const std::array<int, 2>> top2) {
  if (records.size() != top2.size()) {
    throw HprmError(ErrorCode::kLengthMismatch, "records and rankings differ");
  }
  std::vector<TrainingPair> out;
  for (size_t i = 0; i < records.size(); ++i) {
    const CorpusRecord& r = records[i];
    if (!r.hypothesis || r.hotwords.empty()) continue;
    std::unordered_set<int> truth;
    for (const std::string& h : r.hotwords) {
      int id = bank.FindId(h);
      if (id >= 0) truth.insert(id);
    }
    std::unordered_set<int> mined;
    for (size_t h = 0; h < r.hotwords.size(); ++h) {
      for (int cand : top2[i]) {
        if (cand < 0 || truth.count(cand)) continue;
        if (mined.insert(cand).second) {
          out.push_back({cand, bank.ById(cand).surface, *r.hypothesis, 0,
                         PairStage::kMinedNegative});
        }
        break;
      }
    }
  }
  return out;
}

std::vector<TrainingPair> MineNegatives(const ScorerModel& model,
                                        const PhonemeVocab& vocab,
                                        const HotwordBank& bank,
                                        const Lexicon& lexicon,
                                        std::span<const CorpusRecord> records,
                                        int threads) {
  Retriever retriever(model, vocab, bank, lexicon, /*threads=*/1);
  std::vector<std::array<int, 2>> top2(records.size(), {-1, -1});
  ParallelFor(static_cast<int>(records.size()), threads, [&](int i, int) {
    const CorpusRecord& r = records[i];
    if (!r.hypothesis || r.hotwords.empty()) return;
    std::vector<int> ids = retriever.EncodeText(*r.hypothesis);
    if (ids.empty()) return;
    std::vector<ScoredPair> ranked = retriever.TopNIds(ids, 2);
    for (size_t k = 0; k < ranked.size(); ++k) top2[i][k] = ranked[k].hotword_id;
  });
  return MineFromRankings(records, bank, top2);
}

std::vector<std::string> ConfusableChars(const std::string& han_char,
                                         const Lexicon& lexicon) {
  std::vector<std::string> out;
  const std::string* syl = lexicon.ZhSyllable(han_char);
  if (!syl) return out;
  std::unordered_set<std::string> seen = {han_char};
  auto add_all = [&](const std::string& syllable) {
    for (const std::string& c : lexicon.CharsWithSyllable(syllable)) {
      if (seen.insert(c).second) out.push_back(c);
    }
  };
  add_all(*syl);
  auto [initial, final_part] = SplitPinyin(*syl);
  if (!initial.empty()) {
    if (const auto* conf = lexicon.Confusions(initial)) {
      for (const Confusion& c : *conf) add_all(c.target + final_part);
    }
  }
  return out;
}

std::vector<TrainingPair> AugmentPositives(std::span<const CorpusRecord> records,
                                           const Lexicon& lexicon,
                                           int variants_per_hotword,
                                           uint64_t seed) {
  Rng rng(Rng::Mix(seed, 0x61756dULL));
  std::vector<TrainingPair> out;
  for (const CorpusRecord& r : records) {
    for (const std::string& h : r.hotwords) {
      const std::string norm = NormalizeText(h);
      std::vector<std::string> chars = SplitUtf8Chars(norm);
      std::vector<size_t> han;
      for (size_t k = 0; k < chars.size(); ++k) {
        std::u32string cp = DecodeUtf8(chars[k]);
        if (cp.size() == 1 && IsHanChar(cp[0])) han.push_back(k);
      }
      if (han.size() < 2) continue;
      std::unordered_set<std::string> made;
      for (int attempt = 0;
           attempt < 4 * variants_per_hotword &&
           static_cast<int>(made.size()) < variants_per_hotword;
           ++attempt) {
        size_t pos = han[rng.Below(han.size())];
        std::vector<std::string> options = ConfusableChars(chars[pos], lexicon);
        if (options.empty()) continue;
        std::vector<std::string> variant = chars;
        variant[pos] = options[rng.Below(options.size())];
        std::string v;
        for (const std::string& c : variant) v += c;
        if (!made.insert(v).second) continue;
        out.push_back({-1, v, r.reference, 1, PairStage::kAugmentedPositive});
      }
    }
  }
  return out;
}

}  // namespace hprm
