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

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops behind the matrix exponential and the LTI
// propagator. Every kernel has a portable scalar reference and, on x86-64,
// an AVX2+FMA variant chosen once at startup from CPUID. The two variants
// are equivalence-tested against each other; they are not bit-identical
// because FMA rounds once where the scalar path rounds twice.
//
// Matrices are column-major with leading dimension equal to the row count.

namespace serialcon::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;

struct ConstMatView {
  const double* data;
  std::size_t rows;
  std::size_t cols;
};

struct MatView {
  double* data;
  std::size_t rows;
  std::size_t cols;
};

struct KernelTable {
  Isa isa;
  // c = a * b; c must not alias a or b.
  void (*gemm)(ConstMatView a, ConstMatView b, MatView c);
  // y = a * x; y must not alias x.
  void (*gemv)(ConstMatView a, std::span<const double> x, std::span<double> y);
  // y += alpha * x
  void (*axpy)(double alpha, std::span<const double> x, std::span<double> y);
  // acc += |x|, elementwise
  void (*abs_accumulate)(std::span<const double> x, std::span<double> acc);
  // max_i |x_i|; 0 for an empty span, NaN if any entry is NaN
  double (*max_abs)(std::span<const double> x);
};

const KernelTable& scalar_table() noexcept;

// nullptr when the variant is not compiled in or the CPU lacks the feature.
const KernelTable* avx2_table() noexcept;

// Best table for this process. SERIALCON_ISA=scalar in the environment
// forces the reference kernels.
const KernelTable& active() noexcept;

// Overrides the active table; returns false if the ISA is unavailable.
bool select(Isa isa) noexcept;

}  // namespace serialcon::kernels
