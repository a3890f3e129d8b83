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

#ifndef HPRM_ADAMW_H_
#define HPRM_ADAMW_H_

#include <cstdint>
#include <span>
#include <vector>

#include "hprm/scorer_model.h"

namespace hprm {

struct AdamWOptions {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.01;
};

template <typename T>
struct OptimizerState {
  std::vector<T> first_moment;
  std::vector<T> second_moment;
  int64_t step = 0;
};

// One bias-corrected AdamW update with decoupled weight decay. Decay applies
// to conv/dense weights and to embedding rows other than PAD; never to
// biases. Moments are lazily sized to the parameter count.
template <typename T>
void AdamWStep(ScorerModelT<T>* model, OptimizerState<T>* state,
               std::span<const T> grads, const AdamWOptions& options);

}  // namespace hprm

#endif  // HPRM_ADAMW_H_
