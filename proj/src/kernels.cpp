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

#include "serialcon/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace serialcon::kernels {

namespace {

constexpr KernelTable kScalar{
    Isa::scalar,
    detail::gemm_scalar,
    detail::gemv_scalar,
    detail::axpy_scalar,
    detail::abs_accumulate_scalar,
    detail::max_abs_scalar,
};

#if defined(SERIALCON_HAVE_AVX2)
constexpr KernelTable kAvx2{
    Isa::avx2,
    detail::gemm_avx2,
    detail::gemv_avx2,
    detail::axpy_avx2,
    detail::abs_accumulate_avx2,
    detail::max_abs_avx2,
};
#endif

bool cpu_has_avx2() noexcept {
#if defined(SERIALCON_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_table() noexcept {
  if (const char* env = std::getenv("SERIALCON_ISA")) {
    if (std::string_view(env) == "scalar") return &kScalar;
  }
  if (const KernelTable* t = avx2_table()) return t;
  return &kScalar;
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(SERIALCON_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept {
  return *current().load(std::memory_order_acquire);
}

bool select(Isa isa) noexcept {
  const KernelTable* t = isa == Isa::scalar ? &kScalar : avx2_table();
  if (t == nullptr) return false;
  current().store(t, std::memory_order_release);
  return true;
}

}  // namespace serialcon::kernels
