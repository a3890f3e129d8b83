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

#ifndef HPRM_TESTS_GRADIENT_CHECK_H_
#define HPRM_TESTS_GRADIENT_CHECK_H_

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hprm/rng.h"
#include "hprm/scorer_model.h"
#include "hprm/scorer_network.h"

namespace hprm::testing {

struct GradientCheckResult {
  size_t checked = 0;
  size_t failures = 0;
  size_t significant = 0;  // coordinates whose gradient exceeds abs_floor
  // Parameter tensors in which no coordinate exceeds abs_floor.
  std::vector<std::string> silent_tensors;
  double worst_error = 0.0;  // |fd - an| / max(|fd|, |an|, abs_floor)
  std::string worst_param;
};

inline ModelConfig SmallConfig(uint64_t seed) {
  ModelConfig c;
  c.canvas_rows = 8;
  c.canvas_cols = 8;
  c.channels = {2, 3, 3, 4, 4};
  c.fc_hidden = 5;
  c.embed_dim = 4;
  c.vocab_size = 7;
  c.seed = seed;
  return c;
}

// Random small model with positive biases (otherwise whole layers often die
// at this width) and a random batch of 1-3 pairs; compares every analytic
// gradient with central differences. Larger steps straddle max-pool and
// clamp kinks near the tiny initial embeddings.
inline GradientCheckResult CheckGradients(uint64_t seed, double step = 1e-6,
                                          double rel_tol = 1e-3,
                                          double abs_floor = 1e-5) {
  ScorerModelT<double> model = InitModel<double>(SmallConfig(seed));
  Rng rng(seed * 7919 + 1);
  for (const ParamSlot& s : model.layout.slots) {
    if (s.kind != ParamKind::kBias) continue;
    for (size_t i = 0; i < s.size(); ++i) model.data(s)[i] = rng.Uniform(0.05, 0.4);
  }
  const int vocab = model.config.vocab_size;
  std::vector<std::vector<int>> hs, ts;
  std::vector<int> labels;
  int n = rng.Int(1, 3);
  for (int i = 0; i < n; ++i) {
    std::vector<int> h(rng.Int(1, model.config.canvas_rows));
    std::vector<int> t(rng.Int(1, model.config.canvas_cols + 3));
    for (int& x : h) x = rng.Int(1, vocab - 1);
    for (int& x : t) x = rng.Int(1, vocab - 1);
    hs.push_back(h);
    ts.push_back(t);
    labels.push_back(rng.Int(0, 1));
  }
  std::vector<PairInput> batch;
  for (int i = 0; i < n; ++i) batch.push_back({hs[i], ts[i]});

  std::vector<double> grads, scratch;
  ScorerNetwork<double>(model).LossAndGrads(batch, labels, &grads);
  GradientCheckResult r;
  for (const ParamSlot& s : model.layout.slots) {
    const size_t before = r.significant;
    for (size_t k = 0; k < s.size(); ++k) {
      size_t i = s.offset + k;
      double saved = model.params[i];
      model.params[i] = saved + step;
      double up = ScorerNetwork<double>(model).LossAndGrads(batch, labels, &scratch);
      model.params[i] = saved - step;
      double down = ScorerNetwork<double>(model).LossAndGrads(batch, labels, &scratch);
      model.params[i] = saved;
      double fd = (up - down) / (2 * step);
      double diff = std::abs(fd - grads[i]);
      double scale = std::max({std::abs(fd), std::abs(grads[i]), abs_floor});
      ++r.checked;
      if (scale > abs_floor) ++r.significant;
      double err = diff / scale;
      if (err > r.worst_error) {
        r.worst_error = err;
        r.worst_param = s.name + "[" + std::to_string(k) + "]";
      }
      if (err > rel_tol) ++r.failures;
    }
    if (r.significant == before) r.silent_tensors.push_back(s.name);
  }
  return r;
}

}  // namespace hprm::testing

#endif  // HPRM_TESTS_GRADIENT_CHECK_H_
