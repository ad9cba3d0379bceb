// Copyright 2026 The synthqa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// AVX2 + FMA kernels. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after a runtime CPU check.

#include "synthqa/simd/kernels.hpp"

#if defined(SYNTHQA_HAVE_AVX2)

#include <immintrin.h>

namespace synthqa::simd::detail {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 16 <= n; k += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 8), _mm256_loadu_pd(b + k + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 12), _mm256_loadu_pd(b + k + 12), acc3);
  }
  for (; k + 4 <= n; k += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
  }
  double sum = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
  for (; k < n; ++k) sum += a[k] * b[k];
  return sum;
}

double squared_distance_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  for (; k + 4 <= n; k += 4) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
  }
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return sum;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    _mm256_storeu_pd(y + k, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k)));
    _mm256_storeu_pd(y + k + 4,
                     _mm256_fmadd_pd(va, _mm256_loadu_pd(x + k + 4), _mm256_loadu_pd(y + k + 4)));
  }
  for (; k + 4 <= n; k += 4) {
    _mm256_storeu_pd(y + k, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k)));
  }
  for (; k < n; ++k) y[k] += alpha * x[k];
}

// Four references per pass so every query load feeds four FMA chains.
void squared_distances_avx2(const double* query, const double* refs,
                            std::size_t n_refs, std::size_t dim, double* out) {
  std::size_t j = 0;
  for (; j + 4 <= n_refs; j += 4) {
    const double* r0 = refs + j * dim;
    const double* r1 = r0 + dim;
    const double* r2 = r1 + dim;
    const double* r3 = r2 + dim;
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    __m256d acc3 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= dim; k += 4) {
      const __m256d q = _mm256_loadu_pd(query + k);
      const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(r0 + k), q);
      const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(r1 + k), q);
      const __m256d d2 = _mm256_sub_pd(_mm256_loadu_pd(r2 + k), q);
      const __m256d d3 = _mm256_sub_pd(_mm256_loadu_pd(r3 + k), q);
      acc0 = _mm256_fmadd_pd(d0, d0, acc0);
      acc1 = _mm256_fmadd_pd(d1, d1, acc1);
      acc2 = _mm256_fmadd_pd(d2, d2, acc2);
      acc3 = _mm256_fmadd_pd(d3, d3, acc3);
    }
    double s0 = hsum(acc0), s1 = hsum(acc1), s2 = hsum(acc2), s3 = hsum(acc3);
    for (; k < dim; ++k) {
      const double q = query[k];
      s0 += (r0[k] - q) * (r0[k] - q);
      s1 += (r1[k] - q) * (r1[k] - q);
      s2 += (r2[k] - q) * (r2[k] - q);
      s3 += (r3[k] - q) * (r3[k] - q);
    }
    out[j] = s0;
    out[j + 1] = s1;
    out[j + 2] = s2;
    out[j + 3] = s3;
  }
  for (; j < n_refs; ++j) out[j] = squared_distance_avx2(query, refs + j * dim, dim);
}

// 4 x 3 register tile: twelve accumulators, three reference loads and one
// query load per step.
void dot_block_avx2(const double* queries, std::size_t n_queries, const double* refs,
                    std::size_t n_refs, std::size_t dim, double* out) {
  const std::size_t k4 = dim - dim % 4;
  std::size_t i = 0;
  for (; i + 4 <= n_queries; i += 4) {
    const double* q0 = queries + i * dim;
    const double* q1 = q0 + dim;
    const double* q2 = q1 + dim;
    const double* q3 = q2 + dim;
    std::size_t j = 0;
    for (; j + 3 <= n_refs; j += 3) {
      const double* r0 = refs + j * dim;
      const double* r1 = r0 + dim;
      const double* r2 = r1 + dim;
      __m256d a00 = _mm256_setzero_pd(), a01 = _mm256_setzero_pd(), a02 = _mm256_setzero_pd();
      __m256d a10 = _mm256_setzero_pd(), a11 = _mm256_setzero_pd(), a12 = _mm256_setzero_pd();
      __m256d a20 = _mm256_setzero_pd(), a21 = _mm256_setzero_pd(), a22 = _mm256_setzero_pd();
      __m256d a30 = _mm256_setzero_pd(), a31 = _mm256_setzero_pd(), a32 = _mm256_setzero_pd();
      for (std::size_t k = 0; k < k4; k += 4) {
        const __m256d b0 = _mm256_loadu_pd(r0 + k);
        const __m256d b1 = _mm256_loadu_pd(r1 + k);
        const __m256d b2 = _mm256_loadu_pd(r2 + k);
        __m256d q = _mm256_loadu_pd(q0 + k);
        a00 = _mm256_fmadd_pd(q, b0, a00);
        a01 = _mm256_fmadd_pd(q, b1, a01);
        a02 = _mm256_fmadd_pd(q, b2, a02);
        q = _mm256_loadu_pd(q1 + k);
        a10 = _mm256_fmadd_pd(q, b0, a10);
        a11 = _mm256_fmadd_pd(q, b1, a11);
        a12 = _mm256_fmadd_pd(q, b2, a12);
        q = _mm256_loadu_pd(q2 + k);
        a20 = _mm256_fmadd_pd(q, b0, a20);
        a21 = _mm256_fmadd_pd(q, b1, a21);
        a22 = _mm256_fmadd_pd(q, b2, a22);
        q = _mm256_loadu_pd(q3 + k);
        a30 = _mm256_fmadd_pd(q, b0, a30);
        a31 = _mm256_fmadd_pd(q, b1, a31);
        a32 = _mm256_fmadd_pd(q, b2, a32);
      }
      const __m256d acc[4][3] = {
          {a00, a01, a02}, {a10, a11, a12}, {a20, a21, a22}, {a30, a31, a32}};
      const double* qs[4] = {q0, q1, q2, q3};
      const double* rs[3] = {r0, r1, r2};
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 3; ++b) {
          double sum = hsum(acc[a][b]);
          for (std::size_t k = k4; k < dim; ++k) sum += qs[a][k] * rs[b][k];
          out[(i + a) * n_refs + j + b] = sum;
        }
      }
    }
    for (; j < n_refs; ++j) {
      for (std::size_t a = 0; a < 4; ++a) {
        out[(i + a) * n_refs + j] = dot_avx2(queries + (i + a) * dim, refs + j * dim, dim);
      }
    }
  }
  for (; i < n_queries; ++i) {
    for (std::size_t j = 0; j < n_refs; ++j) {
      out[i * n_refs + j] = dot_avx2(queries + i * dim, refs + j * dim, dim);
    }
  }
}

const Kernels kAvx2{Isa::kAvx2, dot_avx2, squared_distance_avx2, axpy_avx2,
                    squared_distances_avx2, dot_block_avx2};

}  // namespace

const Kernels* avx2_kernels() { return &kAvx2; }

}  // namespace synthqa::simd::detail

#else

namespace synthqa::simd::detail {
const Kernels* avx2_kernels() { return nullptr; }
}  // namespace synthqa::simd::detail

#endif
