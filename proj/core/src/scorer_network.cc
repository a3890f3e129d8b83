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

#include "hprm/scorer_network.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "hprm/error.h"
#include "kernels.h"

namespace hprm {

using kernels::GemmAB;
using kernels::GemmABt;
using kernels::RoundUpColumns;
using kernels::kColumnBlock;

double PositiveProbability(double negative_logit, double positive_logit) {
  double m = std::max(negative_logit, positive_logit);
  double en = std::exp(negative_logit - m);
  double ep = std::exp(positive_logit - m);
  return ep / (en + ep);
}

template <typename T>
void ScorerNetwork<T>::BuildLevels(std::span<const std::pair<int, int>> dims) {
  const int num_levels = model_->num_conv();
  levels_.resize(num_levels);
  for (int l = 0; l < num_levels; ++l) {
    Level& lv = levels_[l];
    lv.h.resize(dims.size());
    lv.w.resize(dims.size());
    lv.offset.resize(dims.size());
    int off = 0;
    for (size_t n = 0; n < dims.size(); ++n) {
      int h, w;
      if (l == 0) {
        h = dims[n].first;
        w = dims[n].second;
      } else {
        h = (levels_[l - 1].h[n] + 1) / 2;
        w = (levels_[l - 1].w[n] + 1) / 2;
      }
      lv.h[n] = h;
      lv.w[n] = w;
      lv.offset[n] = off;
      off += h * w;
    }
    lv.total = off;
    // Keeps at least one zero column past the last position; missing taps
    // read from it.
    lv.stride = RoundUpColumns(off + 1);

    lv.taps.assign(static_cast<size_t>(9) * lv.stride, off);
    for (size_t n = 0; n < dims.size(); ++n) {
      const int h = lv.h[n], w = lv.w[n], base = lv.offset[n];
      for (int t = 0; t < 9; ++t) {
        const int dy = t / 3 - 1, dx = t % 3 - 1;
        int* row = lv.taps.data() + static_cast<size_t>(t) * lv.stride + base;
        for (int y = 0; y < h; ++y) {
          const int sy = y + dy;
          if (sy < 0 || sy >= h) continue;
          for (int x = 0; x < w; ++x) {
            const int sx = x + dx;
            if (sx >= 0 && sx < w) row[y * w + x] = base + sy * w + sx;
          }
        }
      }
    }
    lv.window.clear();
    if (l > 0) {
      const Level& pv = levels_[l - 1];
      lv.window.assign(static_cast<size_t>(4) * lv.stride, -1);
      for (size_t n = 0; n < dims.size(); ++n) {
        const int h = pv.h[n], w = pv.w[n], base = pv.offset[n];
        for (int oy = 0; oy < lv.h[n]; ++oy) {
          for (int ox = 0; ox < lv.w[n]; ++ox) {
            const int p = lv.offset[n] + oy * lv.w[n] + ox;
            for (int q = 0; q < 4; ++q) {
              const int y = 2 * oy + q / 2, x = 2 * ox + q % 2;
              if (y < h && x < w) {
                lv.window[static_cast<size_t>(q) * lv.stride + p] =
                    base + y * w + x;
              }
            }
          }
        }
      }
    }
  }
}

template <typename T>
void ScorerNetwork<T>::PrepareCosine(std::span<const PairInput> batch,
                                     bool keep_cache) {
  const ModelConfig& cfg = model_->config;
  const int dim = cfg.embed_dim;
  std::vector<std::pair<int, int>> dims(batch.size());
  pairs_.resize(batch.size());
  for (size_t n = 0; n < batch.size(); ++n) {
    const PairInput& p = batch[n];
    int h = static_cast<int>(p.hotword_ids.size());
    int w = std::min(static_cast<int>(p.text_ids.size()), cfg.canvas_cols);
    if (h < 1 || w < 1) {
      throw HprmError(ErrorCode::kShapeMismatch, "empty phoneme sequence");
    }
    if (h > cfg.canvas_rows) {
      throw HprmError(ErrorCode::kShapeMismatch,
                      "hotword has " + std::to_string(h) +
                          " phonemes, canvas rows " +
                          std::to_string(cfg.canvas_rows));
    }
    dims[n] = {h, w};
    PairCache& pc = pairs_[n];
    pc.hotword_ids.assign(p.hotword_ids.begin(), p.hotword_ids.end());
    pc.text_ids.assign(p.text_ids.begin(), p.text_ids.begin() + w);
  }
  BuildLevels(dims);
  const Level& lv = levels_[0];
  input_.assign(lv.stride, T(0));

  auto normalize = [&](const std::vector<int>& ids, std::vector<T>* unit,
                       std::vector<T>* norms) {
    unit->resize(ids.size() * dim);
    norms->resize(ids.size());
    for (size_t r = 0; r < ids.size(); ++r) {
      if (ids[r] <= 0 || ids[r] >= cfg.vocab_size) {
        throw HprmError(ErrorCode::kUnknownPhoneme,
                        "phoneme id " + std::to_string(ids[r]));
      }
      auto e = model_->embedding_row(ids[r]);
      T sq = 0;
      for (T x : e) sq += x * x;
      if (sq == T(0)) {
        throw HprmError(ErrorCode::kZeroVectorRow,
                        "embedding row " + std::to_string(ids[r]));
      }
      T norm = std::max<T>(std::sqrt(sq), static_cast<T>(kNormEpsilon));
      (*norms)[r] = norm;
      for (int d = 0; d < dim; ++d) (*unit)[r * dim + d] = e[d] / norm;
    }
  };

  for (size_t n = 0; n < batch.size(); ++n) {
    PairCache& pc = pairs_[n];
    normalize(pc.hotword_ids, &pc.u, &pc.u_norm);
    normalize(pc.text_ids, &pc.v, &pc.v_norm);
    const int h = lv.h[n], w = lv.w[n];
    T* out = input_.data() + lv.offset[n];
    for (int i = 0; i < h; ++i) {
      const T* u = pc.u.data() + static_cast<size_t>(i) * dim;
      for (int j = 0; j < w; ++j) {
        if (pc.hotword_ids[i] == pc.text_ids[j]) {
          out[i * w + j] = T(1);
          continue;
        }
        const T* v = pc.v.data() + static_cast<size_t>(j) * dim;
        T dot = 0;
        for (int d = 0; d < dim; ++d) dot += u[d] * v[d];
        out[i * w + j] = std::clamp<T>(dot, T(-1), T(1));
      }
    }
  }
  if (!keep_cache) {
    for (PairCache& pc : pairs_) {
      pc.u.clear();
      pc.v.clear();
    }
  }
}

template <typename T>
void ScorerNetwork<T>::RunCnn(std::vector<Logits<T>>* out) {
  const ModelConfig& cfg = model_->config;
  const ParamLayout& layout = model_->layout;
  const int nc = model_->num_conv();
  const size_t batch = levels_[0].h.size();
  cols_.resize(nc);
  acts_.resize(nc);
  pooled_.resize(nc);
  argmax_.resize(nc);

  const T* in = input_.data();
  int c_in = 1;
  for (int layer = 0; layer < nc; ++layer) {
    const Level& lv = levels_[layer];
    const int c_out = cfg.channels[layer];
    const int k_dim = c_in * 9;
    const int stride = lv.stride;

    // im2col with zero padding at each pair's region border.
    std::vector<T>& col = cols_[layer];
    col.resize(static_cast<size_t>(k_dim) * stride);
    for (int c = 0; c < c_in; ++c) {
      const T* src = in + static_cast<size_t>(c) * stride;
      for (int t = 0; t < 9; ++t) {
        const int* tap = lv.taps.data() + static_cast<size_t>(t) * stride;
        T* dst = col.data() + static_cast<size_t>(c * 9 + t) * stride;
        kernels::Gather(src, tap, dst, stride);
      }
    }

    std::vector<T>& act = acts_[layer];
    act.resize(static_cast<size_t>(c_out) * stride);
    GemmAB<T>(c_out, stride, k_dim, model_->data(layout.conv_weight(layer)),
              k_dim, col.data(), stride, act.data(), stride);
    const T* bias = model_->data(layout.conv_bias(layer));
    for (int o = 0; o < c_out; ++o) {
      T* row = act.data() + static_cast<size_t>(o) * stride;
      for (int p = 0; p < lv.total; ++p) row[p] = std::max(row[p] + bias[o], T(0));
      std::fill(row + lv.total, row + stride, T(0));
    }

    if (layer + 1 < nc) {
      const Level& nx = levels_[layer + 1];
      std::vector<T>& pool = pooled_[layer];
      std::vector<int>& arg = argmax_[layer];
      pool.assign(static_cast<size_t>(c_out) * nx.stride, T(0));
      arg.assign(static_cast<size_t>(c_out) * nx.stride, -1);
      for (int c = 0; c < c_out; ++c) {
        const T* src = act.data() + static_cast<size_t>(c) * stride;
        T* dst = pool.data() + static_cast<size_t>(c) * nx.stride;
        int* adst = arg.data() + static_cast<size_t>(c) * nx.stride;
        for (int p = 0; p < nx.total; ++p) {
          int best = nx.window[p];
          T best_v = src[best];
          for (int q = 1; q < 4; ++q) {
            const int idx = nx.window[static_cast<size_t>(q) * nx.stride + p];
            if (idx >= 0 && src[idx] > best_v) {
              best = idx;
              best_v = src[idx];
            }
          }
          dst[p] = best_v;
          adst[p] = best;
        }
      }
      in = pool.data();
    }
    c_in = c_out;
  }

  // Global average pool over each pair's region.
  const Level& last = levels_[nc - 1];
  const int c_last = cfg.channels[nc - 1];
  const int bs = RoundUpColumns(static_cast<int>(batch));
  batch_stride_ = bs;
  gap_.assign(static_cast<size_t>(c_last) * bs, T(0));
  for (int c = 0; c < c_last; ++c) {
    const T* row = acts_[nc - 1].data() + static_cast<size_t>(c) * last.stride;
    for (size_t n = 0; n < batch; ++n) {
      const int area = last.h[n] * last.w[n];
      T sum = 0;
      for (int p = 0; p < area; ++p) sum += row[last.offset[n] + p];
      gap_[c * bs + n] = sum / static_cast<T>(area);
    }
  }

  const int hid = cfg.fc_hidden;
  const T* w1 = model_->data(layout.fc_weight(0));
  const T* b1 = model_->data(layout.fc_bias(0));
  const T* w2 = model_->data(layout.fc_weight(1));
  const T* b2 = model_->data(layout.fc_bias(1));
  hidden_.resize(static_cast<size_t>(hid) * bs);
  GemmAB<T>(hid, bs, c_last, w1, c_last, gap_.data(), bs, hidden_.data(), bs);
  for (int j = 0; j < hid; ++j) {
    T* row = hidden_.data() + static_cast<size_t>(j) * bs;
    for (size_t n = 0; n < batch; ++n) row[n] = std::max(row[n] + b1[j], T(0));
  }
  logits_.assign(2 * batch, T(0));
  out->resize(batch);
  for (size_t n = 0; n < batch; ++n) {
    for (int k = 0; k < 2; ++k) {
      T s = b2[k];
      for (int j = 0; j < hid; ++j) s += w2[k * hid + j] * hidden_[j * bs + n];
      logits_[k * batch + n] = s;
      (*out)[n][k] = s;
    }
  }
}

template <typename T>
void ScorerNetwork<T>::Forward(std::span<const PairInput> batch,
                               std::vector<Logits<T>>* out) {
  out->clear();
  if (batch.empty()) return;
  PrepareCosine(batch, /*keep_cache=*/false);
  RunCnn(out);
}

template <typename T>
void ScorerNetwork<T>::ForwardCanvases(
    std::span<const SimilarityCanvas> canvases, std::vector<Logits<T>>* out) {
  out->clear();
  if (canvases.empty()) return;
  const ModelConfig& cfg = model_->config;
  std::vector<std::pair<int, int>> dims(canvases.size());
  for (size_t n = 0; n < canvases.size(); ++n) {
    const SimilarityCanvas& c = canvases[n];
    if (c.rows != cfg.canvas_rows || c.cols != cfg.canvas_cols ||
        c.values.size() != static_cast<size_t>(c.rows) * c.cols ||
        c.valid_rows > c.rows || c.valid_cols > c.cols) {
      throw HprmError(ErrorCode::kShapeMismatch,
                      "canvas " + std::to_string(c.rows) + "x" +
                          std::to_string(c.cols) + " vs model " +
                          std::to_string(cfg.canvas_rows) + "x" +
                          std::to_string(cfg.canvas_cols));
    }
    dims[n] = {std::max(c.valid_rows, 1), std::max(c.valid_cols, 1)};
  }
  BuildLevels(dims);
  const Level& lv = levels_[0];
  input_.assign(lv.stride, T(0));
  for (size_t n = 0; n < canvases.size(); ++n) {
    const SimilarityCanvas& c = canvases[n];
    for (int i = 0; i < lv.h[n]; ++i) {
      for (int j = 0; j < lv.w[n]; ++j) {
        input_[lv.offset[n] + i * lv.w[n] + j] = static_cast<T>(c.at(i, j));
      }
    }
  }
  RunCnn(out);
}

template <typename T>
T ScorerNetwork<T>::LossAndGrads(std::span<const PairInput> batch,
                                 std::span<const int> labels,
                                 std::vector<T>* grads) {
  if (batch.empty() || batch.size() != labels.size()) {
    throw HprmError(ErrorCode::kBadInput, "batch and labels must align");
  }
  PrepareCosine(batch, /*keep_cache=*/true);
  std::vector<Logits<T>> logits;
  RunCnn(&logits);
  T loss = 0;
  for (size_t n = 0; n < batch.size(); ++n) {
    T m = std::max(logits[n][0], logits[n][1]);
    T lse = m + std::log(std::exp(logits[n][0] - m) + std::exp(logits[n][1] - m));
    loss += lse - logits[n][labels[n] ? 1 : 0];
  }
  loss /= static_cast<T>(batch.size());
  if (!std::isfinite(loss)) {
    throw HprmError(ErrorCode::kNonFiniteLoss, "loss is not finite");
  }
  Backward(labels, grads);
  return loss;
}

template <typename T>
void ScorerNetwork<T>::Backward(std::span<const int> labels,
                                std::vector<T>* grads) {
  const ModelConfig& cfg = model_->config;
  const ParamLayout& layout = model_->layout;
  const int nc = model_->num_conv();
  const size_t batch = labels.size();
  const T inv_batch = T(1) / static_cast<T>(batch);
  grads->assign(layout.total, T(0));
  auto g = [&](const ParamSlot& s) { return grads->data() + s.offset; };

  // Softmax cross-entropy.
  d_logits_.assign(2 * batch, T(0));
  for (size_t n = 0; n < batch; ++n) {
    T z0 = logits_[n], z1 = logits_[batch + n];
    T m = std::max(z0, z1);
    T e0 = std::exp(z0 - m), e1 = std::exp(z1 - m);
    T p1 = e1 / (e0 + e1);
    T p0 = e0 / (e0 + e1);
    d_logits_[n] = (p0 - (labels[n] ? T(0) : T(1))) * inv_batch;
    d_logits_[batch + n] = (p1 - (labels[n] ? T(1) : T(0))) * inv_batch;
  }

  // fc2, fc1.
  const int hid = cfg.fc_hidden;
  const int c_last = cfg.channels[nc - 1];
  const T* w1 = model_->data(layout.fc_weight(0));
  const T* w2 = model_->data(layout.fc_weight(1));
  T* gw2 = g(layout.fc_weight(1));
  T* gb2 = g(layout.fc_bias(1));
  const int bs = batch_stride_;
  d_hidden_.assign(static_cast<size_t>(hid) * batch, T(0));
  for (int k = 0; k < 2; ++k) {
    for (size_t n = 0; n < batch; ++n) {
      T d = d_logits_[k * batch + n];
      gb2[k] += d;
      for (int j = 0; j < hid; ++j) {
        gw2[k * hid + j] += d * hidden_[j * bs + n];
        d_hidden_[j * batch + n] += d * w2[k * hid + j];
      }
    }
  }
  T* gw1 = g(layout.fc_weight(0));
  T* gb1 = g(layout.fc_bias(0));
  d_gap_.assign(static_cast<size_t>(c_last) * batch, T(0));
  for (int j = 0; j < hid; ++j) {
    for (size_t n = 0; n < batch; ++n) {
      if (hidden_[j * bs + n] <= T(0)) continue;
      T d = d_hidden_[j * batch + n];
      gb1[j] += d;
      for (int c = 0; c < c_last; ++c) {
        gw1[j * c_last + c] += d * gap_[c * bs + n];
        d_gap_[c * batch + n] += d * w1[j * c_last + c];
      }
    }
  }

  // Average pool -> gradient on the last activation.
  {
    const Level& last = levels_[nc - 1];
    d_act_.assign(static_cast<size_t>(c_last) * last.stride, T(0));
    for (int c = 0; c < c_last; ++c) {
      T* row = d_act_.data() + static_cast<size_t>(c) * last.stride;
      for (size_t n = 0; n < batch; ++n) {
        const int area = last.h[n] * last.w[n];
        T d = d_gap_[c * batch + n] / static_cast<T>(area);
        for (int p = 0; p < area; ++p) row[last.offset[n] + p] = d;
      }
    }
  }

  for (int layer = nc - 1; layer >= 0; --layer) {
    const Level& lv = levels_[layer];
    const int c_out = cfg.channels[layer];
    const int c_in = layer == 0 ? 1 : cfg.channels[layer - 1];
    const int k_dim = c_in * 9;
    const int stride = lv.stride;
    const std::vector<T>& act = acts_[layer];

    // Through ReLU; d_act_ becomes d(pre-activation).
    for (size_t i = 0; i < d_act_.size(); ++i) {
      if (act[i] <= T(0)) d_act_[i] = T(0);
    }
    T* gb = g(layout.conv_bias(layer));
    for (int o = 0; o < c_out; ++o) {
      const T* row = d_act_.data() + static_cast<size_t>(o) * stride;
      T s = 0;
      for (int p = 0; p < lv.total; ++p) s += row[p];
      gb[o] += s;
    }
    if (k_dim < kColumnBlock) {
      GemmABt<T>(c_out, k_dim, stride, d_act_.data(), stride,
                 cols_[layer].data(), stride, g(layout.conv_weight(layer)),
                 k_dim, /*accumulate=*/true);
    } else {
      // Short reductions at the deep levels: broadcast over col^T instead.
      const int kp = RoundUpColumns(k_dim);
      const std::vector<T>& col = cols_[layer];
      col_t_.assign(static_cast<size_t>(stride) * kp, T(0));
      for (int k = 0; k < k_dim; ++k) {
        const T* src = col.data() + static_cast<size_t>(k) * stride;
        for (int p = 0; p < lv.total; ++p) col_t_[static_cast<size_t>(p) * kp + k] = src[p];
      }
      d_w_.resize(static_cast<size_t>(c_out) * kp);
      GemmAB<T>(c_out, kp, lv.total, d_act_.data(), stride, col_t_.data(), kp,
                d_w_.data(), kp);
      T* gw = g(layout.conv_weight(layer));
      for (int o = 0; o < c_out; ++o) {
        const T* src = d_w_.data() + static_cast<size_t>(o) * kp;
        T* dst = gw + static_cast<size_t>(o) * k_dim;
        for (int k = 0; k < k_dim; ++k) dst[k] += src[k];
      }
    }

    // d(col) = W^T d(pre-activation), then col2im.
    const T* w = model_->data(layout.conv_weight(layer));
    w_t_.resize(static_cast<size_t>(k_dim) * c_out);
    for (int o = 0; o < c_out; ++o) {
      for (int k = 0; k < k_dim; ++k) w_t_[k * c_out + o] = w[o * k_dim + k];
    }
    d_col_.resize(static_cast<size_t>(k_dim) * stride);
    GemmAB<T>(k_dim, stride, c_out, w_t_.data(), c_out, d_act_.data(), stride,
              d_col_.data(), stride);
    d_in_.assign(static_cast<size_t>(c_in) * stride, T(0));
    for (int c = 0; c < c_in; ++c) {
      T* dst = d_in_.data() + static_cast<size_t>(c) * stride;
      for (int t = 0; t < 9; ++t) {
        const int* tap = lv.taps.data() + static_cast<size_t>(t) * stride;
        const T* src = d_col_.data() + static_cast<size_t>(c * 9 + t) * stride;
        for (int p = 0; p < lv.total; ++p) {
          if (tap[p] != lv.total) dst[tap[p]] += src[p];
        }
      }
    }

    if (layer > 0) {
      // Route pooled gradients back to the arg-max cells.
      const Level& prev = levels_[layer - 1];
      d_act_.assign(static_cast<size_t>(c_in) * prev.stride, T(0));
      const std::vector<int>& arg = argmax_[layer - 1];
      for (int c = 0; c < c_in; ++c) {
        const T* src = d_in_.data() + static_cast<size_t>(c) * stride;
        const int* a = arg.data() + static_cast<size_t>(c) * stride;
        T* dst = d_act_.data() + static_cast<size_t>(c) * prev.stride;
        for (int q = 0; q < lv.total; ++q) dst[a[q]] += src[q];
      }
    }
  }

  // Cosine matrix -> embedding rows.
  const int dim = cfg.embed_dim;
  T* ge = g(layout.embedding());
  const Level& lv0 = levels_[0];
  std::vector<T> du, dv;
  for (size_t n = 0; n < batch; ++n) {
    const PairCache& pc = pairs_[n];
    const int h = lv0.h[n], w = lv0.w[n];
    const T* dc = d_in_.data() + lv0.offset[n];
    du.assign(static_cast<size_t>(h) * dim, T(0));
    dv.assign(static_cast<size_t>(w) * dim, T(0));
    for (int i = 0; i < h; ++i) {
      const T* u = pc.u.data() + static_cast<size_t>(i) * dim;
      for (int j = 0; j < w; ++j) {
        if (pc.hotword_ids[i] == pc.text_ids[j]) continue;  // constant 1
        const T* v = pc.v.data() + static_cast<size_t>(j) * dim;
        T dot = 0;
        for (int d = 0; d < dim; ++d) dot += u[d] * v[d];
        if (dot > T(1) || dot < T(-1)) continue;  // clamped
        T d_ij = dc[i * w + j];
        if (d_ij == T(0)) continue;
        for (int d = 0; d < dim; ++d) {
          du[i * dim + d] += d_ij * v[d];
          dv[j * dim + d] += d_ij * u[d];
        }
      }
    }
    // d e = (d unit - (d unit . unit) unit) / norm
    auto scatter = [&](const std::vector<int>& ids, const std::vector<T>& unit,
                       const std::vector<T>& norms, const std::vector<T>& dunit) {
      for (size_t r = 0; r < ids.size(); ++r) {
        const T* un = unit.data() + r * dim;
        const T* dn = dunit.data() + r * dim;
        T proj = 0;
        for (int d = 0; d < dim; ++d) proj += dn[d] * un[d];
        T* dst = ge + static_cast<size_t>(ids[r]) * dim;
        for (int d = 0; d < dim; ++d) {
          dst[d] += (dn[d] - proj * un[d]) / norms[r];
        }
      }
    };
    scatter(pc.hotword_ids, pc.u, pc.u_norm, du);
    scatter(pc.text_ids, pc.v, pc.v_norm, dv);
  }
  for (int d = 0; d < dim; ++d) ge[d] = T(0);  // PAD
}

template class ScorerNetwork<float>;
template class ScorerNetwork<double>;

Logits<float> Forward(const ScorerModel& model, const SimilarityCanvas& canvas) {
  ScorerNetwork<float> net(model);
  std::vector<Logits<float>> out;
  net.ForwardCanvases(std::span<const SimilarityCanvas>(&canvas, 1), &out);
  return out[0];
}

}  // namespace hprm
