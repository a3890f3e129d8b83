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

#ifndef HPRM_SIMILARITY_H_
#define HPRM_SIMILARITY_H_

#include <filesystem>
#include <string>
#include <vector>

#include "hprm/matrix.h"

namespace hprm {

inline constexpr int kDefaultCanvasRows = 24;
inline constexpr int kDefaultCanvasCols = 128;
inline constexpr double kNormEpsilon = 1e-12;

// Fixed-size CNN input: hotword phonemes on rows, transcript phonemes on
// columns, cosine values in the top-left valid region and exact zeros
// elsewhere.
struct SimilarityCanvas {
  int rows = kDefaultCanvasRows;
  int cols = kDefaultCanvasCols;
  int valid_rows = 0;
  int valid_cols = 0;
  std::vector<float> values;  // rows * cols, row-major

  float at(int r, int c) const {
    return values[static_cast<size_t>(r) * cols + c];
  }
};

// out(i, j) = cos(hotword row i, text row j), clamped to [-1, 1]. Norms are
// floored at kNormEpsilon; an exactly zero row throws kZeroVectorRow.
template <typename T>
Matrix<T> CosineMatrix(const Matrix<T>& hotword_emb, const Matrix<T>& text_emb);

// Copies `sim` into the top-left of a rows x cols canvas, dropping text
// columns beyond `cols`. Throws kShapeMismatch if sim has more than `rows`
// rows.
template <typename T>
SimilarityCanvas ToCanvas(const Matrix<T>& sim, int rows = kDefaultCanvasRows,
                          int cols = kDefaultCanvasCols);

// Row-major CSV of the valid region, six decimals.
std::string HeatmapCsv(const SimilarityCanvas& canvas);
void ExportHeatmap(const SimilarityCanvas& canvas,
                   const std::filesystem::path& path);

struct DiagonalContrast {
  int best_offset = 0;      // column of the band start for hotword row 0
  double band_mean = 0.0;   // mean of values(i, best_offset + i)
  double off_band_mean = 0.0;
  double contrast() const { return band_mean - off_band_mean; }
};

// Finds the diagonal band with the highest mean and compares it with the
// mean of every other valid cell. Only bands of min(valid_rows, valid_cols)
// cells are considered.
DiagonalContrast MeasureDiagonalContrast(const SimilarityCanvas& canvas);

}  // namespace hprm

#endif  // HPRM_SIMILARITY_H_
