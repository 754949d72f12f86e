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

#include <cmath>
#include <limits>
#include <vector>

#include "serialcon/kernels.hpp"
#include "test_util.hpp"

using namespace serialcon;
namespace k = serialcon::kernels;

namespace {

const k::KernelTable* simd() { return k::avx2_table(); }

std::vector<double> uniform_values(Rng& rng, std::size_t count) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> out(count);
  for (double& v : out) v = u(rng);
  return out;
}

// Plain triple loop, column-major.
std::vector<double> naive_gemm(const std::vector<double>& a,
                               const std::vector<double>& b, std::size_t m,
                               std::size_t kk, std::size_t n) {
  std::vector<double> c(m * n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t p = 0; p < kk; ++p)
      for (std::size_t i = 0; i < m; ++i) c[i + j * m] += a[i + p * m] * b[p + j * kk];
  return c;
}

}  // namespace

TEST_CASE("scalar gemm matches a naive triple loop") {
  Rng rng(11);
  for (auto [m, kk, n] : {std::array<std::size_t, 3>{1, 1, 1}, {3, 5, 2},
                          {7, 7, 7}, {16, 9, 13}, {33, 17, 5}}) {
    const auto a = uniform_values(rng, m * kk);
    const auto b = uniform_values(rng, kk * n);
    std::vector<double> c(m * n, -1.0);
    k::scalar_table().gemm({a.data(), m, kk}, {b.data(), kk, n}, {c.data(), m, n});
    const auto ref = naive_gemm(a, b, m, kk, n);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(c[i] == doctest::Approx(ref[i]).epsilon(1e-13));
  }
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (simd() == nullptr) {
    MESSAGE("AVX2 not available on this machine; skipping");
    return;
  }
  const auto& ref = k::scalar_table();
  const auto& fast = *simd();
  Rng rng(12);

  SUBCASE("gemm on ragged shapes") {
    for (std::size_t m : {1u, 3u, 4u, 5u, 8u, 13u, 40u}) {
      for (std::size_t n : {1u, 2u, 7u, 9u}) {
        const std::size_t kk = 6;
        const auto a = uniform_values(rng, m * kk);
        const auto b = uniform_values(rng, kk * n);
        std::vector<double> c1(m * n), c2(m * n);
        ref.gemm({a.data(), m, kk}, {b.data(), kk, n}, {c1.data(), m, n});
        fast.gemm({a.data(), m, kk}, {b.data(), kk, n}, {c2.data(), m, n});
        for (std::size_t i = 0; i < c1.size(); ++i) {
          CHECK(std::abs(c1[i] - c2[i]) <= 1e-13 * (1.0 + std::abs(c1[i])));
        }
      }
    }
  }

  SUBCASE("gemv, axpy, abs_accumulate, max_abs") {
    for (std::size_t n : {1u, 3u, 4u, 7u, 16u, 21u}) {
      const auto a = uniform_values(rng, n * n);
      const auto x = uniform_values(rng, n);
      std::vector<double> y1(n), y2(n);
      ref.gemv({a.data(), n, n}, x, y1);
      fast.gemv({a.data(), n, n}, x, y2);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-13);

      auto z1 = uniform_values(rng, n);
      auto z2 = z1;
      ref.axpy(0.75, x, z1);
      fast.axpy(0.75, x, z2);
      for (std::size_t i = 0; i < n; ++i) CHECK(z1[i] == doctest::Approx(z2[i]).epsilon(1e-15));

      std::vector<double> acc1(n, 0.5), acc2(n, 0.5);
      ref.abs_accumulate(x, acc1);
      fast.abs_accumulate(x, acc2);
      CHECK(acc1 == acc2);
      CHECK(ref.max_abs(x) == fast.max_abs(x));
    }
  }
}

TEST_CASE("max_abs propagates NaN in every variant") {
  std::vector<double> x = {1.0, -3.0, 2.0, 0.5, 7.0, -1.0};
  x[4] = std::numeric_limits<double>::quiet_NaN();
  CHECK(std::isnan(k::scalar_table().max_abs(x)));
  if (simd()) CHECK(std::isnan(simd()->max_abs(x)));
  const std::vector<double> empty;
  CHECK(k::scalar_table().max_abs(empty) == 0.0);
}

TEST_CASE("select switches the active table") {
  const k::Isa before = k::active().isa;
  REQUIRE(k::select(k::Isa::scalar));
  CHECK(k::active().isa == k::Isa::scalar);
  CHECK(k::select(k::Isa::avx2) == (simd() != nullptr));
  k::select(before);
  CHECK(k::to_string(k::Isa::avx2) == "avx2");
}
