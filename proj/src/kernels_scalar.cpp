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

#include <cmath>
#include <limits>

namespace serialcon::kernels::detail {

void gemm_scalar(ConstMatView a, ConstMatView b, MatView c) {
  const std::size_t m = a.rows;
  const std::size_t k_dim = a.cols;
  for (std::size_t j = 0; j < b.cols; ++j) {
    double* cj = c.data + j * m;
    for (std::size_t i = 0; i < m; ++i) cj[i] = 0.0;
    for (std::size_t k = 0; k < k_dim; ++k) {
      const double bkj = b.data[j * b.rows + k];
      if (bkj == 0.0) continue;
      const double* ak = a.data + k * m;
      for (std::size_t i = 0; i < m; ++i) cj[i] += ak[i] * bkj;
    }
  }
}

void gemv_scalar(ConstMatView a, std::span<const double> x,
                 std::span<double> y) {
  const std::size_t m = a.rows;
  for (std::size_t i = 0; i < m; ++i) y[i] = 0.0;
  for (std::size_t k = 0; k < a.cols; ++k) {
    const double xk = x[k];
    if (xk == 0.0) continue;
    const double* ak = a.data + k * m;
    for (std::size_t i = 0; i < m; ++i) y[i] += ak[i] * xk;
  }
}

void axpy_scalar(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void abs_accumulate_scalar(std::span<const double> x, std::span<double> acc) {
  for (std::size_t i = 0; i < x.size(); ++i) acc[i] += std::fabs(x[i]);
}

double max_abs_scalar(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) {
    if (std::isnan(v)) return std::numeric_limits<double>::quiet_NaN();
    m = std::fmax(m, std::fabs(v));
  }
  return m;
}

}  // namespace serialcon::kernels::detail
