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

#include "hprm/adamw.h"

#include <cmath>

#include "hprm/error.h"

namespace hprm {

template <typename T>
void AdamWStep(ScorerModelT<T>* model, OptimizerState<T>* state,
               std::span<const T> grads, const AdamWOptions& options) {
  const size_t n = model->params.size();
  if (grads.size() != n) {
    throw HprmError(ErrorCode::kShapeMismatch, "gradient size mismatch");
  }
  if (state->first_moment.size() != n) {
    state->first_moment.assign(n, T(0));
    state->second_moment.assign(n, T(0));
    state->step = 0;
  }
  ++state->step;
  const double b1 = options.beta1, b2 = options.beta2;
  const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state->step));
  const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state->step));
  const double lr = options.lr;
  const double decay = 1.0 - lr * options.weight_decay;

  for (const ParamSlot& slot : model->layout.slots) {
    T* p = model->params.data() + slot.offset;
    T* m = state->first_moment.data() + slot.offset;
    T* v = state->second_moment.data() + slot.offset;
    const T* g = grads.data() + slot.offset;
    size_t begin = 0;
    bool decayed = slot.kind != ParamKind::kBias;
    if (slot.kind == ParamKind::kEmbedding) begin = slot.cols;  // skip PAD
    for (size_t i = begin; i < slot.size(); ++i) {
      double gi = g[i];
      double mi = b1 * m[i] + (1.0 - b1) * gi;
      double vi = b2 * v[i] + (1.0 - b2) * gi * gi;
      m[i] = static_cast<T>(mi);
      v[i] = static_cast<T>(vi);
      double pi = p[i];
      if (decayed) pi *= decay;
      pi -= lr * (mi / bc1) / (std::sqrt(vi / bc2) + options.eps);
      p[i] = static_cast<T>(pi);
    }
  }
}

template void AdamWStep(ScorerModelT<float>*, OptimizerState<float>*,
                        std::span<const float>, const AdamWOptions&);
template void AdamWStep(ScorerModelT<double>*, OptimizerState<double>*,
                        std::span<const double>, const AdamWOptions&);

}  // namespace hprm
