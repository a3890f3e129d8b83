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

#ifndef HPRM_METRICS_H_
#define HPRM_METRICS_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hprm/hotword_bank.h"
#include "hprm/retriever.h"
#include "hprm/text_normalizer.h"

namespace hprm {

struct EvalRecord {
  std::string reference;
  std::string hypothesis;
  std::vector<std::string> hotwords;

  bool operator==(const EvalRecord&) const = default;
};

// A rate with its counts. An empty denominator gives rate 0 and sets
// `undefined`.
struct Rate {
  int64_t numerator = 0;
  int64_t denominator = 0;

  double value() const {
    return denominator ? static_cast<double>(numerator) / denominator : 0.0;
  }
  bool undefined() const { return denominator == 0; }
};

int EditDistance(std::span<const Token> a, std::span<const Token> b);

// Token edit distance over the reference token count (at least 1). Han
// characters and Latin words are one token each. Not capped at 1.
double Mer(std::string_view reference, std::string_view hypothesis);

// Records (with at least one hotword) whose hotwords all appear among the
// first n retrieved entries. Throws kLengthMismatch.
Rate Prrr(std::span<const EvalRecord> records,
          std::span<const RetrievalResult> retrievals, const HotwordBank& bank,
          int n);

struct PostMetrics {
  Rate prr;
  Rate ppr;
  double pf1 = 0.0;
};

// Substring presence of hotwords in the normalized hypothesis. PRR is over
// ground-truth hotwords; PPR is over bank hotwords present in the hypothesis.
PostMetrics ComputePostMetrics(std::span<const EvalRecord> records,
                               const HotwordBank& bank);

double Pf1(double prr, double ppr);

// Mann-Whitney estimate of the ROC area; ties count one half. Throws
// kBadInput when a class is missing.
double Auc(std::span<const double> scores, std::span<const int> labels);

struct MetricsReport {
  int n = 0;
  Rate prrr;
  // Filled only when a rescoring hook supplies final hypotheses.
  bool has_post = false;
  double mer = 0.0;
  PostMetrics post;
};

}  // namespace hprm

#endif  // HPRM_METRICS_H_
