/*
 * Copyright 2026 The serialcon Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "kernels_impl.hpp"

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace serialcon::kernels::detail {

namespace {

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, swapped));
}

// Not a namespace-scope constant: a static initializer in this TU would run
// AVX instructions before the CPU check.
inline __m256d abs_mask() {
  return _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
}

// c_col += a[:, k..k+3] * b[k..k+3], four columns of A per pass so each
// C element is loaded and stored once per four FMAs.
inline void update_column4(const double* a0, const double* a1,
                           const double* a2, const double* a3, double b0,
                           double b1, double b2, double b3, double* c,
                           std::size_t m) {
  const __m256d vb0 = _mm256_set1_pd(b0);
  const __m256d vb1 = _mm256_set1_pd(b1);
  const __m256d vb2 = _mm256_set1_pd(b2);
  const __m256d vb3 = _mm256_set1_pd(b3);
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    __m256d acc = _mm256_loadu_pd(c + i);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a0 + i), vb0, acc);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a1 + i), vb1, acc);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a2 + i), vb2, acc);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a3 + i), vb3, acc);
    _mm256_storeu_pd(c + i, acc);
  }
  for (; i < m; ++i) {
    double acc = c[i];
    acc = std::fma(a0[i], b0, acc);
    acc = std::fma(a1[i], b1, acc);
    acc = std::fma(a2[i], b2, acc);
    acc = std::fma(a3[i], b3, acc);
    c[i] = acc;
  }
}

inline void update_column1(const double* a0, double b0, double* c,
                           std::size_t m) {
  const __m256d vb0 = _mm256_set1_pd(b0);
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    __m256d acc = _mm256_loadu_pd(c + i);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a0 + i), vb0, acc);
    _mm256_storeu_pd(c + i, acc);
  }
  for (; i < m; ++i) c[i] = std::fma(a0[i], b0, c[i]);
}

}  // namespace

void gemm_avx2(ConstMatView a, ConstMatView b, MatView c) {
  const std::size_t m = a.rows;
  const std::size_t k_dim = a.cols;
  for (std::size_t j = 0; j < b.cols; ++j) {
    double* cj = c.data + j * m;
    const double* bj = b.data + j * b.rows;
    for (std::size_t i = 0; i < m; ++i) cj[i] = 0.0;
    std::size_t k = 0;
    for (; k + 4 <= k_dim; k += 4) {
      update_column4(a.data + k * m, a.data + (k + 1) * m,
                     a.data + (k + 2) * m, a.data + (k + 3) * m, bj[k],
                     bj[k + 1], bj[k + 2], bj[k + 3], cj, m);
    }
    for (; k < k_dim; ++k) update_column1(a.data + k * m, bj[k], cj, m);
  }
}

void gemv_avx2(ConstMatView a, std::span<const double> x,
               std::span<double> y) {
  const std::size_t m = a.rows;
  for (std::size_t i = 0; i < m; ++i) y[i] = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= a.cols; k += 4) {
    update_column4(a.data + k * m, a.data + (k + 1) * m, a.data + (k + 2) * m,
                   a.data + (k + 3) * m, x[k], x[k + 1], x[k + 2], x[k + 3],
                   y.data(), m);
  }
  for (; k < a.cols; ++k) update_column1(a.data + k * m, x[k], y.data(), m);
}

void axpy_avx2(double alpha, std::span<const double> x, std::span<double> y) {
  update_column1(x.data(), alpha, y.data(), x.size());
}

void abs_accumulate_avx2(std::span<const double> x, std::span<double> acc) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_and_pd(_mm256_loadu_pd(x.data() + i), abs_mask());
    _mm256_storeu_pd(acc.data() + i,
                     _mm256_add_pd(_mm256_loadu_pd(acc.data() + i), v));
  }
  for (; i < n; ++i) acc[i] += std::fabs(x[i]);
}

double max_abs_avx2(std::span<const double> x) {
  const std::size_t n = x.size();
  __m256d vmax = _mm256_setzero_pd();
  __m256d nan_seen = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x.data() + i);
    nan_seen = _mm256_or_pd(nan_seen, _mm256_cmp_pd(v, v, _CMP_UNORD_Q));
    vmax = _mm256_max_pd(vmax, _mm256_and_pd(v, abs_mask()));
  }
  if (_mm256_movemask_pd(nan_seen) != 0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  double m = hmax(vmax);
  for (; i < n; ++i) {
    if (std::isnan(x[i])) return std::numeric_limits<double>::quiet_NaN();
    m = std::fmax(m, std::fabs(x[i]));
  }
  return m;
}

}  // namespace serialcon::kernels::detail
