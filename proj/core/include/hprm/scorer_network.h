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

#ifndef HPRM_SCORER_NETWORK_H_
#define HPRM_SCORER_NETWORK_H_

#include <array>
#include <span>
#include <vector>

#include "hprm/scorer_model.h"
#include "hprm/similarity.h"

namespace hprm {

// One (hotword, transcript) pair as phoneme ids. Transcripts longer than the
// canvas are truncated from the right; hotwords longer than the canvas are a
// kShapeMismatch.
struct PairInput {
  std::span<const int> hotword_ids;
  std::span<const int> text_ids;
};

template <typename T>
using Logits = std::array<T, 2>;  // {negative, positive}

// Positive-class softmax probability, computed in double.
double PositiveProbability(double negative_logit, double positive_logit);

// Forward and backward passes of the scorer over a batch.
//
// Layers: [conv3x3 -> ReLU -> maxpool2x2] for all but the last conv, then
// conv3x3 -> ReLU -> global average pool -> fc1 -> ReLU -> fc2. The network
// only sees the valid region of each canvas: convolutions zero-pad at the
// region border, pooling rounds odd sizes up, and the average pool divides by
// the region's area. Cells of the fixed canvas outside the valid region are
// therefore inert. Pairs are laid out side by side in a batch and no result
// depends on which other pairs share the batch.
//
// Holds scratch buffers; one instance per thread. The model must outlive it.
template <typename T>
class ScorerNetwork {
 public:
  explicit ScorerNetwork(const ScorerModelT<T>& model) : model_(&model) {}

  // Cosine similarity from the model's embeddings, then the CNN.
  void Forward(std::span<const PairInput> batch, std::vector<Logits<T>>* out);

  // CNN on precomputed canvases; canvas dims must match the model config.
  void ForwardCanvases(std::span<const SimilarityCanvas> canvases,
                       std::vector<Logits<T>>* out);

  // Mean softmax cross-entropy over the batch. `grads` is resized to the
  // parameter count and overwritten; it covers every tensor including the
  // embedding rows reached through the cosine matrix (the PAD row stays
  // zero). Throws kNonFiniteLoss.
  T LossAndGrads(std::span<const PairInput> batch, std::span<const int> labels,
                 std::vector<T>* grads);

 private:
  struct Level {
    std::vector<int> h, w, offset;
    int total = 0;
    int stride = 0;
    // taps[t * stride + p]: source position of 3x3 tap t for output p, or
    // `total` (an always-zero column) when the tap falls outside the region.
    std::vector<int> taps;
    // window[q * stride + p]: q-th cell of the 2x2 window in the previous
    // level pooled into p, or -1. Empty for level 0.
    std::vector<int> window;
  };
  struct PairCache {
    std::vector<int> hotword_ids, text_ids;
    std::vector<T> u, v;            // unit-normalized embedding rows
    std::vector<T> u_norm, v_norm;  // floored norms
  };

  void BuildLevels(std::span<const std::pair<int, int>> dims);
  void PrepareCosine(std::span<const PairInput> batch, bool keep_cache);
  void RunCnn(std::vector<Logits<T>>* out);
  void Backward(std::span<const int> labels, std::vector<T>* grads);

  const ScorerModelT<T>* model_;
  std::vector<Level> levels_;
  std::vector<PairCache> pairs_;
  std::vector<T> input_;
  std::vector<std::vector<T>> cols_, acts_, pooled_;
  std::vector<std::vector<int>> argmax_;
  std::vector<T> gap_, hidden_, logits_;
  int batch_stride_ = 0;  // column stride of gap_ and hidden_
  // Backward scratch.
  std::vector<T> d_act_, d_col_, d_in_, w_t_, col_t_, d_w_;
  std::vector<T> d_gap_, d_hidden_, d_logits_;
};

extern template class ScorerNetwork<float>;
extern template class ScorerNetwork<double>;

// Convenience single-canvas forward.
Logits<float> Forward(const ScorerModel& model, const SimilarityCanvas& canvas);

}  // namespace hprm

#endif  // HPRM_SCORER_NETWORK_H_
