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

#include "hprm/evaluation.h"

#include <algorithm>
#include <cstdio>
#include <json.hpp>
#include <unordered_set>

#include "hprm/asr_simulator.h"
#include "hprm/error.h"
#include "hprm/parallel.h"
#include "hprm/rng.h"
#include "hprm/text_normalizer.h"

namespace hprm {

namespace {

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

RetrievalResult Prefix(const RetrievalResult& r, int n) {
  RetrievalResult out;
  out.query_text = r.query_text;
  out.topn = n;
  out.empty_query = r.empty_query;
  out.ranked.assign(r.ranked.begin(),
                    r.ranked.begin() + std::min<size_t>(r.ranked.size(), n));
  return out;
}

std::string PronunciationKey(const Token& t, const Lexicon& lexicon) {
  if (t.kind == TokenKind::kHanChar) {
    if (const std::string* syl = lexicon.ZhSyllable(t.surface)) return *syl;
  } else if (t.kind == TokenKind::kLatinWord) {
    if (const auto* phones = lexicon.EnPhones(t.surface)) {
      std::string k;
      for (const std::string& p : *phones) k += p + " ";
      return k;
    }
  }
  return "=" + t.surface;
}

}  // namespace

RescoreHook PhoneticRescorer(const HotwordBank& bank, const Lexicon& lexicon) {
  return [&bank, &lexicon](const EvalRecord& record, const RetrievalResult& top) {
    std::vector<Token> hyp = NormalizeAndTokenize(record.hypothesis);
    std::vector<std::string> surfaces, keys;
    for (const Token& t : hyp) {
      surfaces.push_back(t.surface);
      keys.push_back(PronunciationKey(t, lexicon));
    }
    for (const ScoredPair& sp : top.ranked) {
      std::vector<Token> hw = NormalizeAndTokenize(bank.ById(sp.hotword_id).surface);
      if (hw.empty() || hw.size() > hyp.size()) continue;
      std::vector<std::string> hk;
      for (const Token& t : hw) hk.push_back(PronunciationKey(t, lexicon));
      for (size_t i = 0; i + hw.size() <= keys.size(); ++i) {
        if (!std::equal(hk.begin(), hk.end(), keys.begin() + i)) continue;
        for (size_t k = 0; k < hw.size(); ++k) surfaces[i + k] = hw[k].surface;
        i += hw.size() - 1;
      }
    }
    return JoinTokens(surfaces);
  };
}

namespace {

int CheckNList(const SweepOptions& options) {
  if (options.n_list.empty()) throw HprmError(ErrorCode::kBadInput, "empty n list");
  for (int n : options.n_list) {
    if (n < 1) throw HprmError(ErrorCode::kBadInput, "n must be >= 1");
  }
  return *std::max_element(options.n_list.begin(), options.n_list.end());
}

}  // namespace

SweepResult SweepFromRetrievals(const HotwordBank& bank,
                                std::span<const EvalRecord> records,
                                std::vector<RetrievalResult> retrievals,
                                const SweepOptions& options) {
  CheckNList(options);
  if (retrievals.size() != records.size()) {
    throw HprmError(ErrorCode::kLengthMismatch, "one retrieval per record");
  }
  SweepResult result;
  result.retrievals = std::move(retrievals);
  for (int n : options.n_list) {
    std::vector<RetrievalResult> top(records.size());
    for (size_t i = 0; i < records.size(); ++i) {
      top[i] = Prefix(result.retrievals[i], n);
    }
    MetricsReport row;
    row.n = n;
    row.prrr = Prrr(records, top, bank, n);
    if (options.rescore) {
      std::vector<EvalRecord> rescored(records.begin(), records.end());
      double mer_sum = 0.0;
      for (size_t i = 0; i < records.size(); ++i) {
        rescored[i].hypothesis = options.rescore(records[i], top[i]);
        mer_sum += Mer(records[i].reference, rescored[i].hypothesis);
      }
      row.has_post = true;
      row.mer = records.empty() ? 0.0 : mer_sum / records.size();
      row.post = ComputePostMetrics(rescored, bank);
    }
    result.rows.push_back(row);
  }
  return result;
}

SweepResult EvaluateSweep(const ScorerModel& model, const PhonemeVocab& vocab,
                          const HotwordBank& bank, const Lexicon& lexicon,
                          std::span<const EvalRecord> records,
                          const SweepOptions& options) {
  const int max_n = CheckNList(options);
  Retriever retriever(model, vocab, bank, lexicon, /*threads=*/1);
  std::vector<RetrievalResult> retrievals(records.size());
  ParallelFor(static_cast<int>(records.size()), options.threads, [&](int i, int) {
    retrievals[i] = retriever.TopN(records[i].hypothesis, max_n);
  });
  return SweepFromRetrievals(bank, records, std::move(retrievals), options);
}

SweepResult EvaluateBaselineSweep(const HotwordBank& bank,
                                  std::span<const EvalRecord> records,
                                  const SweepOptions& options) {
  const int max_n = CheckNList(options);
  std::vector<RetrievalResult> retrievals(records.size());
  ParallelFor(static_cast<int>(records.size()), options.threads, [&](int i, int) {
    retrievals[i] = RetrieveBaselineEdit(bank, records[i].hypothesis, max_n);
  });
  return SweepFromRetrievals(bank, records, std::move(retrievals), options);
}

std::string SweepTsv(const SweepResult& result) {
  const bool post = !result.rows.empty() && result.rows[0].has_post;
  std::string out = post ? "N\tPrRR\tPRR\tPF1\tMER\n" : "N\tPrRR\n";
  for (const MetricsReport& r : result.rows) {
    out += std::to_string(r.n) + "\t" + Fixed(100.0 * r.prrr.value(), 2);
    if (post) {
      out += "\t" + Fixed(100.0 * r.post.prr.value(), 2) + "\t" +
             Fixed(100.0 * r.post.pf1, 2) + "\t" + Fixed(100.0 * r.mer, 2);
    }
    out += "\n";
  }
  return out;
}

std::string SweepJson(const SweepResult& result) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  size_t empty = 0;
  for (const RetrievalResult& r : result.retrievals) empty += r.empty_query;
  for (const MetricsReport& r : result.rows) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["prrr"] = r.prrr.value();
    j["prrr_numerator"] = r.prrr.numerator;
    j["prrr_denominator"] = r.prrr.denominator;
    if (r.has_post) {
      j["mer"] = r.mer;
      j["prr"] = r.post.prr.value();
      j["prr_numerator"] = r.post.prr.numerator;
      j["prr_denominator"] = r.post.prr.denominator;
      j["ppr"] = r.post.ppr.value();
      j["ppr_numerator"] = r.post.ppr.numerator;
      j["ppr_denominator"] = r.post.ppr.denominator;
      j["ppr_undefined"] = r.post.ppr.undefined();
      j["pf1"] = r.post.pf1;
    }
    rows.push_back(j);
  }
  nlohmann::ordered_json out;
  out["records"] = result.retrievals.size();
  out["empty_queries"] = empty;
  out["rows"] = rows;
  return out.dump(2) + "\n";
}

std::vector<ScalingPoint> ScalingCurve(const ScorerModel& model,
                                       const PhonemeVocab& vocab,
                                       const Lexicon& lexicon,
                                       std::span<const std::string> core,
                                       std::span<const std::string> distractor_pool,
                                       std::span<const int> sizes,
                                       std::span<const EvalRecord> records,
                                       int n, uint64_t seed, int threads) {
  if (sizes.empty()) throw HprmError(ErrorCode::kBadInput, "no bank sizes");
  std::unordered_set<std::string> truth;
  for (const EvalRecord& r : records) {
    for (const std::string& h : r.hotwords) truth.insert(NormalizeText(h));
  }
  std::unordered_set<std::string> core_set;
  for (const std::string& h : core) core_set.insert(NormalizeText(h));
  std::vector<std::string> pool;
  for (const std::string& d : distractor_pool) {
    std::string norm = NormalizeText(d);
    if (truth.count(norm)) {
      throw HprmError(ErrorCode::kBadInput,
                      "distractor \"" + d + "\" is a ground-truth hotword");
    }
    if (!core_set.count(norm)) pool.push_back(d);
  }
  Rng rng(Rng::Mix(seed, 0x7363616c65ULL));
  rng.Shuffle(pool);

  const int largest = *std::max_element(sizes.begin(), sizes.end());
  std::vector<std::string> all(core.begin(), core.end());
  all.insert(all.end(), pool.begin(), pool.end());
  HotwordBank full = BuildBank(all, lexicon, vocab);
  const int core_size = static_cast<int>(core_set.size());
  for (int s : sizes) {
    if (s < core_size) {
      throw HprmError(ErrorCode::kBadInput,
                      "bank size " + std::to_string(s) + " below core size " +
                          std::to_string(core_size));
    }
  }
  if (static_cast<int>(full.size()) < largest) {
    throw HprmError(ErrorCode::kInsufficientDistractors,
                    "need " + std::to_string(largest - core_size) +
                        " distractors, have " +
                        std::to_string(full.size() - core_size));
  }
  std::vector<HotwordEntry> entries(full.entries().begin(),
                                    full.entries().begin() + largest);
  HotwordBank bank(full.vocab_hash(), entries);

  Retriever retriever(model, vocab, bank, lexicon, /*threads=*/1);
  std::vector<std::vector<double>> scores(records.size());
  ParallelFor(static_cast<int>(records.size()), threads, [&](int i, int) {
    std::vector<int> ids = retriever.EncodeText(records[i].hypothesis);
    if (!ids.empty()) scores[i] = retriever.ScoreAll(ids);
  });

  std::vector<ScalingPoint> curve;
  for (int s : sizes) {
    std::span<const HotwordEntry> prefix(bank.entries().data(), s);
    std::vector<RetrievalResult> top(records.size());
    for (size_t i = 0; i < records.size(); ++i) {
      top[i].topn = n;
      if (scores[i].empty()) {
        top[i].empty_query = true;
        continue;
      }
      top[i].ranked =
          RankTopN(std::span<const double>(scores[i].data(), s), prefix, n);
    }
    curve.push_back({s, Prrr(records, top, bank, n)});
  }
  return curve;
}

std::string ScalingTsv(std::span<const ScalingPoint> curve, int n) {
  std::string out = "size\tPrRR@" + std::to_string(n) + "\n";
  for (const ScalingPoint& p : curve) {
    out += std::to_string(p.size) + "\t" + Fixed(100.0 * p.prrr.value(), 2) + "\n";
  }
  return out;
}

}  // namespace hprm
