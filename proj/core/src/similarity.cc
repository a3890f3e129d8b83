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

#include "hprm/similarity.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "hprm/binary_io.h"
#include "hprm/error.h"

namespace hprm {

namespace {

template <typename T>
std::vector<T> RowNorms(const Matrix<T>& m, const char* which) {
  std::vector<T> norms(m.rows);
  for (int r = 0; r < m.rows; ++r) {
    T sq = 0;
    for (T v : m.Row(r)) sq += v * v;
    if (sq == T(0)) {
      throw HprmError(ErrorCode::kZeroVectorRow,
                      std::string(which) + " row " + std::to_string(r));
    }
    norms[r] = std::max<T>(std::sqrt(sq), static_cast<T>(kNormEpsilon));
  }
  return norms;
}

}  // namespace

template <typename T>
Matrix<T> CosineMatrix(const Matrix<T>& hotword_emb,
                       const Matrix<T>& text_emb) {
  if (hotword_emb.rows < 1 || text_emb.rows < 1 || hotword_emb.cols < 1 ||
      hotword_emb.cols != text_emb.cols) {
    throw HprmError(ErrorCode::kShapeMismatch,
                    "cosine inputs must be non-empty with equal widths");
  }
  std::vector<T> hn = RowNorms(hotword_emb, "hotword");
  std::vector<T> tn = RowNorms(text_emb, "text");
  Matrix<T> out(hotword_emb.rows, text_emb.rows);
  for (int i = 0; i < hotword_emb.rows; ++i) {
    auto a = hotword_emb.Row(i);
    for (int j = 0; j < text_emb.rows; ++j) {
      auto b = text_emb.Row(j);
      T dot = 0;
      for (int d = 0; d < hotword_emb.cols; ++d) dot += a[d] * b[d];
      out(i, j) = std::clamp<T>(dot / (hn[i] * tn[j]), T(-1), T(1));
    }
  }
  return out;
}

template <typename T>
SimilarityCanvas ToCanvas(const Matrix<T>& sim, int rows, int cols) {
  if (sim.rows > rows) {
    throw HprmError(ErrorCode::kShapeMismatch,
                    "similarity has " + std::to_string(sim.rows) +
                        " rows, canvas allows " + std::to_string(rows));
  }
  SimilarityCanvas c;
  c.rows = rows;
  c.cols = cols;
  c.valid_rows = sim.rows;
  c.valid_cols = std::min(sim.cols, cols);
  c.values.assign(static_cast<size_t>(rows) * cols, 0.0f);
  for (int i = 0; i < c.valid_rows; ++i) {
    for (int j = 0; j < c.valid_cols; ++j) {
      c.values[static_cast<size_t>(i) * cols + j] =
          static_cast<float>(sim(i, j));
    }
  }
  return c;
}

template Matrix<float> CosineMatrix(const Matrix<float>&, const Matrix<float>&);
template Matrix<double> CosineMatrix(const Matrix<double>&,
                                     const Matrix<double>&);
template SimilarityCanvas ToCanvas(const Matrix<float>&, int, int);
template SimilarityCanvas ToCanvas(const Matrix<double>&, int, int);

std::string HeatmapCsv(const SimilarityCanvas& canvas) {
  std::string out;
  char buf[32];
  for (int i = 0; i < canvas.valid_rows; ++i) {
    for (int j = 0; j < canvas.valid_cols; ++j) {
      if (j > 0) out.push_back(',');
      std::snprintf(buf, sizeof buf, "%.6f",
                    static_cast<double>(canvas.at(i, j)));
      out += buf;
    }
    out.push_back('\n');
  }
  return out;
}

void ExportHeatmap(const SimilarityCanvas& canvas,
                   const std::filesystem::path& path) {
  WriteFileAtomic(path, HeatmapCsv(canvas));
}

DiagonalContrast MeasureDiagonalContrast(const SimilarityCanvas& canvas) {
  const int h = canvas.valid_rows;
  const int w = canvas.valid_cols;
  DiagonalContrast best;
  best.band_mean = -std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) total += canvas.at(i, j);
  }
  for (int o = -(h - 1); o <= w - 1; ++o) {
    double sum = 0.0;
    int n = 0;
    for (int i = 0; i < h; ++i) {
      int j = o + i;
      if (j < 0 || j >= w) continue;
      sum += canvas.at(i, j);
      ++n;
    }
    if (n < std::min(h, w)) continue;
    if (sum / n > best.band_mean) {
      best.best_offset = o;
      best.band_mean = sum / n;
      int rest = h * w - n;
      best.off_band_mean = rest > 0 ? (total - sum) / rest : 0.0;
    }
  }
  return best;
}

}  // namespace hprm
