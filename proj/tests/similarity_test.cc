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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <vector>

#include "hprm/binary_io.h"
#include "hprm/error.h"
#include "hprm/matrix.h"
#include "hprm/rng.h"
#include "hprm/scorer.h"
#include "hprm/scorer_model.h"
#include "hprm/scorer_network.h"
#include "hprm/similarity.h"

namespace hprm {
namespace {

Matrix<double> Mat(int rows, int cols, std::vector<double> values) {
  Matrix<double> m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = values[r * cols + c];
  }
  return m;
}

Matrix<double> RandomMat(Rng& rng, int rows, int cols) {
  Matrix<double> m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = rng.Normal();
  }
  return m;
}

TEST(CosineMatrix, Examples) {
  EXPECT_EQ(CosineMatrix(Mat(1, 2, {1, 0}), Mat(1, 2, {1, 0}))(0, 0), 1.0);
  EXPECT_EQ(CosineMatrix(Mat(1, 2, {1, 0}), Mat(1, 2, {0, 1}))(0, 0), 0.0);
  EXPECT_NEAR(CosineMatrix(Mat(1, 2, {1, 1}), Mat(1, 2, {1, 0}))(0, 0),
              0.70710678, 1e-8);
}

TEST(CosineMatrix, ZeroRowAndShapeErrors) {
  try {
    CosineMatrix(Mat(2, 2, {1, 0, 0, 0}), Mat(1, 2, {1, 0}));
    ADD_FAILURE();
  } catch (const HprmError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroVectorRow);
    EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos);
  }
  EXPECT_THROW(CosineMatrix(Mat(1, 2, {1, 0}), Mat(1, 3, {1, 0, 0})), HprmError);
}

TEST(CosineMatrix, TinyNormsAreFloored) {
  Matrix<double> tiny = Mat(1, 2, {1e-20, 0});
  Matrix<double> m = CosineMatrix(tiny, Mat(1, 2, {1, 0}));
  EXPECT_NEAR(m(0, 0), 1e-8, 1e-20);
}

TEST(CosineMatrix, TransposeSymmetryAndScaleInvariance) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    int h = rng.Int(1, 6), t = rng.Int(1, 9), d = rng.Int(1, 8);
    Matrix<double> a = RandomMat(rng, h, d), b = RandomMat(rng, t, d);
    Matrix<double> ab = CosineMatrix(a, b), ba = CosineMatrix(b, a);
    Matrix<double> scaled = a;
    int row = rng.Int(0, h - 1);
    double c = rng.Uniform(0.01, 100.0);
    for (int k = 0; k < d; ++k) scaled(row, k) *= c;
    Matrix<double> sc = CosineMatrix(scaled, b);
    for (int i = 0; i < h; ++i) {
      for (int j = 0; j < t; ++j) {
        EXPECT_EQ(ab(i, j), ba(j, i));
        EXPECT_NEAR(sc(i, j), ab(i, j), 1e-9);
        EXPECT_LE(std::abs(ab(i, j)), 1.0);
      }
    }
  }
}

TEST(ToCanvas, CopiesTopLeftAndTruncatesColumns) {
  Rng rng(2);
  Matrix<double> sim = RandomMat(rng, 4, 10);
  SimilarityCanvas c = ToCanvas(sim);
  EXPECT_EQ(c.rows, 24);
  EXPECT_EQ(c.cols, 128);
  EXPECT_EQ(c.valid_rows, 4);
  EXPECT_EQ(c.valid_cols, 10);
  for (int i = 0; i < c.rows; ++i) {
    for (int j = 0; j < c.cols; ++j) {
      float expect = (i < 4 && j < 10) ? static_cast<float>(sim(i, j)) : 0.0f;
      EXPECT_EQ(c.at(i, j), expect);
    }
  }
  SimilarityCanvas wide = ToCanvas(RandomMat(rng, 4, 300));
  EXPECT_EQ(wide.valid_cols, 128);
  EXPECT_EQ(wide.values.size(), 24u * 128u);
  EXPECT_THROW(ToCanvas(RandomMat(rng, 25, 3)), HprmError);
}

TEST(ToCanvas, IdenticalSequencesGiveUnitDiagonal) {
  Rng rng(3);
  Matrix<double> e = RandomMat(rng, 4, 8);
  SimilarityCanvas c = ToCanvas(CosineMatrix(e, e));
  for (int i = 0; i < 4; ++i) EXPECT_EQ(c.at(i, i), 1.0f);
}

TEST(HeatmapCsv, Examples) {
  EXPECT_EQ(HeatmapCsv(ToCanvas(Mat(1, 1, {1.0}))), "1.000000\n");
  EXPECT_EQ(HeatmapCsv(ToCanvas(Mat(2, 2, {1, 0, 0, 1}))),
            "1.000000,0.000000\n0.000000,1.000000\n");
  EXPECT_EQ(HeatmapCsv(ToCanvas(Mat(1, 2, {-0.25, 0.1234567}))),
            "-0.250000,0.123457\n");
}

TEST(ExportHeatmap, WritesFileAndSurfacesIoErrors) {
  auto path = std::filesystem::temp_directory_path() / "hprm_heatmap_test.csv";
  ExportHeatmap(ToCanvas(Mat(1, 1, {1.0})), path);
  EXPECT_EQ(ReadFileText(path), "1.000000\n");
  std::filesystem::remove(path);
  EXPECT_THROW(ExportHeatmap(ToCanvas(Mat(1, 1, {1.0})), "/nonexistent/dir/x.csv"),
               HprmError);
}

ScorerModel RandomModel(uint64_t seed) {
  ModelConfig c;
  c.vocab_size = 40;
  c.seed = seed;
  return InitModel<float>(c);
}

TEST(PairCanvas, ExactMatchDiagonalIsExactlyOne) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    ScorerModel model = RandomModel(trial);
    int n = rng.Int(1, 8), pre = rng.Int(0, 10), post = rng.Int(0, 10);
    std::vector<int> hw, text;
    for (int i = 0; i < n; ++i) hw.push_back(rng.Int(1, 39));
    for (int i = 0; i < pre; ++i) text.push_back(rng.Int(1, 39));
    text.insert(text.end(), hw.begin(), hw.end());
    for (int i = 0; i < post; ++i) text.push_back(rng.Int(1, 39));
    SimilarityCanvas c = PairCanvas(model, hw, text);
    double sum = 0;
    for (int i = 0; i < n; ++i) sum += c.at(i, pre + i);
    EXPECT_EQ(sum / n, 1.0);
    DiagonalContrast dc = MeasureDiagonalContrast(c);
    EXPECT_EQ(dc.band_mean, 1.0);
  }
}

TEST(PairCanvas, RandomEmbeddingsHaveNearZeroOffBandMean) {
  Rng rng(5);
  double total = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    ScorerModel model = RandomModel(1000 + trial);
    std::vector<int> hw, text;
    for (int i = 0; i < 5; ++i) hw.push_back(rng.Int(1, 39));
    for (int i = 0; i < 30; ++i) text.push_back(rng.Int(1, 39));
    total += MeasureDiagonalContrast(PairCanvas(model, hw, text)).off_band_mean;
  }
  EXPECT_LT(std::abs(total / trials), 0.05);
}

TEST(PairCanvas, FeedsTheNetworkExactly) {
  ScorerModel model = RandomModel(7);
  std::vector<int> hw = {3, 4, 5}, text = {9, 3, 4, 5, 1, 2, 8};
  ScorerNetwork<float> net(model);
  std::vector<PairInput> batch = {{hw, text}};
  std::vector<Logits<float>> direct, via;
  net.Forward(batch, &direct);
  std::vector<SimilarityCanvas> canvases = {PairCanvas(model, hw, text)};
  net.ForwardCanvases(canvases, &via);
  EXPECT_EQ(direct[0], via[0]);
}

TEST(PairCanvas, TruncatesTextAndRejectsLongHotwords) {
  ScorerModel model = RandomModel(8);
  std::vector<int> hw = {1, 2}, text(200, 3);
  SimilarityCanvas c = PairCanvas(model, hw, text);
  EXPECT_EQ(c.valid_cols, 128);
  std::vector<int> long_hw(25, 1);
  EXPECT_THROW(PairCanvas(model, long_hw, text), HprmError);
}

TEST(DiagonalContrast, PicksBestBand) {
  SimilarityCanvas c = ToCanvas(Mat(2, 4, {0, 1, 0, 0,
                                           0, 0, 1, 0}));
  DiagonalContrast dc = MeasureDiagonalContrast(c);
  EXPECT_EQ(dc.best_offset, 1);
  EXPECT_EQ(dc.band_mean, 1.0);
  EXPECT_EQ(dc.off_band_mean, 0.0);
  EXPECT_EQ(dc.contrast(), 1.0);
}

}  // namespace
}  // namespace hprm
