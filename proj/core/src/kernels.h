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

#ifndef HPRM_KERNELS_H_
#define HPRM_KERNELS_H_

// Dense kernels for the scorer. Every output element accumulates its inner
// products in increasing k order with the same instruction sequence no matter
// where it sits in a tile, so results for one column never depend on which
// other columns share the call.

#include <algorithm>
#include <cstddef>

#if defined(__AVX512F__)
#include <immintrin.h>
#endif

namespace hprm::kernels {

// Column counts handed to GemmAB must be a multiple of this.
inline constexpr int kColumnBlock = 32;

inline int RoundUpColumns(int n) {
  return (n + kColumnBlock - 1) / kColumnBlock * kColumnBlock;
}

template <typename T>
struct VecTraits {
  static constexpr int kBytes = 64;
  static constexpr int kLanes = kBytes / static_cast<int>(sizeof(T));
  typedef T Vec __attribute__((vector_size(kBytes)));
  typedef T UVec
      __attribute__((vector_size(kBytes), aligned(sizeof(T)), may_alias));
  static Vec Load(const T* p) { return *reinterpret_cast<const UVec*>(p); }
  static void Store(T* p, Vec v) { *reinterpret_cast<UVec*>(p) = v; }
  static Vec Splat(T x) {
    return Vec{} + x;
  }
};

// dst[p] = src[idx[p]] for p in [0, n).
template <typename T>
inline void Gather(const T* __restrict src, const int* __restrict idx,
                   T* __restrict dst, int n) {
  for (int p = 0; p < n; ++p) dst[p] = src[idx[p]];
}

#if defined(__AVX512F__)
template <>
inline void Gather<float>(const float* __restrict src,
                          const int* __restrict idx, float* __restrict dst,
                          int n) {
  int p = 0;
  for (; p + 16 <= n; p += 16) {
    __m512i vi = _mm512_loadu_si512(idx + p);
    _mm512_storeu_ps(dst + p, _mm512_i32gather_ps(vi, src, 4));
  }
  for (; p < n; ++p) dst[p] = src[idx[p]];
}
#endif

template <typename T, int MR>
inline void GemmABTile(int k_dim, const T* a, int lda, const T* b, int ldb,
                       T* c, int ldc) {
  using VT = VecTraits<T>;
  using Vec = typename VT::Vec;
  constexpr int kVecs = kColumnBlock / VT::kLanes;
  Vec acc[MR][kVecs];
#pragma GCC unroll 16
  for (int r = 0; r < MR; ++r) {
#pragma GCC unroll 16
    for (int v = 0; v < kVecs; ++v) acc[r][v] = Vec{};
  }
  for (int k = 0; k < k_dim; ++k) {
    Vec bv[kVecs];
    const T* brow = b + static_cast<size_t>(k) * ldb;
#pragma GCC unroll 16
    for (int v = 0; v < kVecs; ++v) bv[v] = VT::Load(brow + v * VT::kLanes);
#pragma GCC unroll 16
    for (int r = 0; r < MR; ++r) {
      Vec av = VT::Splat(a[static_cast<size_t>(r) * lda + k]);
#pragma GCC unroll 16
      for (int v = 0; v < kVecs; ++v) acc[r][v] += av * bv[v];
    }
  }
#pragma GCC unroll 16
  for (int r = 0; r < MR; ++r) {
#pragma GCC unroll 16
    for (int v = 0; v < kVecs; ++v) {
      VT::Store(c + static_cast<size_t>(r) * ldc + v * VT::kLanes, acc[r][v]);
    }
  }
}

// C[m][n] = sum_k A[m][k] * B[k][n]; row-major, n_dim % kColumnBlock == 0.
template <typename T>
void GemmAB(int m_dim, int n_dim, int k_dim, const T* a, int lda, const T* b,
            int ldb, T* c, int ldc) {
  constexpr int kMr = 8;
  for (int n0 = 0; n0 < n_dim; n0 += kColumnBlock) {
    int m0 = 0;
    for (; m0 + kMr <= m_dim; m0 += kMr) {
      GemmABTile<T, kMr>(k_dim, a + static_cast<size_t>(m0) * lda, lda,
                         b + n0, ldb, c + static_cast<size_t>(m0) * ldc + n0,
                         ldc);
    }
    for (; m0 < m_dim; ++m0) {
      GemmABTile<T, 1>(k_dim, a + static_cast<size_t>(m0) * lda, lda, b + n0,
                       ldb, c + static_cast<size_t>(m0) * ldc + n0, ldc);
    }
  }
}

template <typename T, int MR, int NR>
inline void GemmABtTile(int k_dim, const T* a, int lda, const T* b, int ldb,
                        T* c, int ldc, bool accumulate) {
  using VT = VecTraits<T>;
  using Vec = typename VT::Vec;
  Vec acc[MR][NR];
#pragma GCC unroll 16
  for (int r = 0; r < MR; ++r) {
#pragma GCC unroll 16
    for (int s = 0; s < NR; ++s) acc[r][s] = Vec{};
  }
  for (int k = 0; k < k_dim; k += VT::kLanes) {
    Vec av[MR], bv[NR];
#pragma GCC unroll 16
    for (int r = 0; r < MR; ++r) {
      av[r] = VT::Load(a + static_cast<size_t>(r) * lda + k);
    }
#pragma GCC unroll 16
    for (int s = 0; s < NR; ++s) {
      bv[s] = VT::Load(b + static_cast<size_t>(s) * ldb + k);
    }
#pragma GCC unroll 16
    for (int r = 0; r < MR; ++r) {
#pragma GCC unroll 16
      for (int s = 0; s < NR; ++s) acc[r][s] += av[r] * bv[s];
    }
  }
  for (int r = 0; r < MR; ++r) {
    for (int s = 0; s < NR; ++s) {
      T sum = 0;
      for (int l = 0; l < VT::kLanes; ++l) sum += acc[r][s][l];
      T& out = c[static_cast<size_t>(r) * ldc + s];
      out = accumulate ? out + sum : sum;
    }
  }
}

// C[m][n] (+)= sum_k A[m][k] * B[n][k]; k_dim % lanes == 0.
template <typename T>
void GemmABt(int m_dim, int n_dim, int k_dim, const T* a, int lda, const T* b,
             int ldb, T* c, int ldc, bool accumulate) {
  constexpr int kMr = 4;
  constexpr int kNr = 4;
  for (int m0 = 0; m0 < m_dim; m0 += kMr) {
    const T* ap = a + static_cast<size_t>(m0) * lda;
    T* cp = c + static_cast<size_t>(m0) * ldc;
    if (m0 + kMr <= m_dim) {
      int n0 = 0;
      for (; n0 + kNr <= n_dim; n0 += kNr) {
        GemmABtTile<T, kMr, kNr>(k_dim, ap, lda,
                                 b + static_cast<size_t>(n0) * ldb, ldb,
                                 cp + n0, ldc, accumulate);
      }
      for (; n0 < n_dim; ++n0) {
        GemmABtTile<T, kMr, 1>(k_dim, ap, lda,
                               b + static_cast<size_t>(n0) * ldb, ldb, cp + n0,
                               ldc, accumulate);
      }
    } else {
      for (int m = m0; m < m_dim; ++m) {
        for (int n = 0; n < n_dim; ++n) {
          GemmABtTile<T, 1, 1>(k_dim, a + static_cast<size_t>(m) * lda, lda,
                               b + static_cast<size_t>(n) * ldb, ldb,
                               c + static_cast<size_t>(m) * ldc + n, ldc,
                               accumulate);
        }
      }
    }
  }
}

}  // namespace hprm::kernels

#endif  // HPRM_KERNELS_H_
