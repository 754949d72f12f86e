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

#pragma once

#include "serialcon/kernels.hpp"

namespace serialcon::kernels::detail {

void gemm_scalar(ConstMatView a, ConstMatView b, MatView c);
void gemv_scalar(ConstMatView a, std::span<const double> x, std::span<double> y);
void axpy_scalar(double alpha, std::span<const double> x, std::span<double> y);
void abs_accumulate_scalar(std::span<const double> x, std::span<double> acc);
double max_abs_scalar(std::span<const double> x);

#if defined(SERIALCON_HAVE_AVX2)
// Defined in kernels_avx2.cpp, which is the only translation unit built with
// -mavx2 -mfma. Never call these without checking CPU support first.
void gemm_avx2(ConstMatView a, ConstMatView b, MatView c);
void gemv_avx2(ConstMatView a, std::span<const double> x, std::span<double> y);
void axpy_avx2(double alpha, std::span<const double> x, std::span<double> y);
void abs_accumulate_avx2(std::span<const double> x, std::span<double> acc);
double max_abs_avx2(std::span<const double> x);
#endif

}  // namespace serialcon::kernels::detail
