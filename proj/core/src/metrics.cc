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

#include "hprm/metrics.h"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "hprm/edit_distance.h"
#include "hprm/error.h"

namespace hprm {

namespace {

struct SurfaceEq {
  bool operator()(const Token& a, const Token& b) const {
    return a.surface == b.surface;
  }
};

}  // namespace

int EditDistance(std::span<const Token> a, std::span<const Token> b) {
  return hprm::EditDistance<Token>(a, b, SurfaceEq{});
}

double Mer(std::string_view reference, std::string_view hypothesis) {
  std::vector<Token> ref = NormalizeAndTokenize(reference);
  std::vector<Token> hyp = NormalizeAndTokenize(hypothesis);
  int d = EditDistance(ref, hyp);
  return static_cast<double>(d) /
         static_cast<double>(std::max<size_t>(1, ref.size()));
}

Rate Prrr(std::span<const EvalRecord> records,
          std::span<const RetrievalResult> retrievals, const HotwordBank& bank,
          int n) {
  if (records.size() != retrievals.size()) {
    throw HprmError(ErrorCode::kLengthMismatch,
                    std::to_string(records.size()) + " records vs " +
                        std::to_string(retrievals.size()) + " retrievals");
  }
  Rate r;
  for (size_t i = 0; i < records.size(); ++i) {
    if (records[i].hotwords.empty()) continue;
    ++r.denominator;
    const std::vector<ScoredPair>& ranked = retrievals[i].ranked;
    const size_t limit = std::min(ranked.size(), static_cast<size_t>(std::max(n, 0)));
    std::unordered_set<std::string> top;
    for (size_t k = 0; k < limit; ++k) {
      top.insert(bank.ById(ranked[k].hotword_id).surface);
    }
    bool all = std::all_of(
        records[i].hotwords.begin(), records[i].hotwords.end(),
        [&](const std::string& h) { return top.count(NormalizeText(h)) > 0; });
    if (all) ++r.numerator;
  }
  return r;
}

double Pf1(double prr, double ppr) {
  return prr + ppr > 0 ? 2 * prr * ppr / (prr + ppr) : 0.0;
}

PostMetrics ComputePostMetrics(std::span<const EvalRecord> records,
                               const HotwordBank& bank) {
  PostMetrics m;
  for (const EvalRecord& rec : records) {
    const std::string hyp = NormalizeText(rec.hypothesis);
    std::unordered_set<std::string> truth;
    for (const std::string& h : rec.hotwords) {
      std::string norm = NormalizeText(h);
      if (!truth.insert(norm).second) continue;
      ++m.prr.denominator;
      if (!norm.empty() && hyp.find(norm) != std::string::npos) {
        ++m.prr.numerator;
      }
    }
    for (const HotwordEntry& e : bank.entries()) {
      if (e.surface.empty() || hyp.find(e.surface) == std::string::npos) continue;
      ++m.ppr.denominator;
      if (truth.count(e.surface)) ++m.ppr.numerator;
    }
  }
  m.pf1 = Pf1(m.prr.value(), m.ppr.value());
  return m;
}

double Auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw HprmError(ErrorCode::kLengthMismatch, "scores and labels differ");
  }
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  // Rank-sum with average ranks for ties.
  double pos_rank_sum = 0.0;
  int64_t pos = 0, neg = 0;
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (size_t k = i; k < j; ++k) {
      if (labels[order[k]]) {
        pos_rank_sum += avg_rank;
        ++pos;
      } else {
        ++neg;
      }
    }
    i = j;
  }
  if (pos == 0 || neg == 0) {
    throw HprmError(ErrorCode::kBadInput, "AUC needs both classes");
  }
  const double u = pos_rank_sum - 0.5 * static_cast<double>(pos) * (pos + 1);
  return u / (static_cast<double>(pos) * static_cast<double>(neg));
}

}  // namespace hprm
