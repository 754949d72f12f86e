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

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "serialcon/kernels.hpp"
#include "serialcon/linalg.hpp"
#include "test_util.hpp"

using namespace serialcon;
using namespace serialcon::test;

namespace {

// Truncated Taylor series with scaling and squaring in long double; used
// only for small, well-scaled inputs.
Matrix taylor_expm(const Matrix& a) {
  using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const int s = 8;
  LMatrix x = a.cast<long double>() / std::pow(2.0L, s);
  LMatrix term = LMatrix::Identity(a.rows(), a.cols());
  LMatrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * x / static_cast<long double>(k);
    sum += term;
  }
  for (int k = 0; k < s; ++k) sum = sum * sum;
  return sum.cast<double>();
}

double rel_err(const Matrix& got, const Matrix& want) {
  return (got - want).norm() / std::max(want.norm(), 1e-300);
}

}  // namespace

TEST_CASE("expm matches the Eigen oracle across norm regimes") {
  Rng rng(21);
  // Scales chosen to land in each Pade degree and in the scaled regime.
  for (double scale : {1e-3, 0.05, 0.3, 0.8, 1.5, 4.0, 20.0}) {
    for (int n : {1, 2, 5, 12}) {
      const Matrix a = random_matrix(rng, n, n, scale / std::sqrt(n));
      const Matrix want = a.exp();
      CHECK(rel_err(expm(a), want) < 1e-12 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("expm matches a long-double Taylor series") {
  Rng rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = random_matrix(rng, 6, 6, 0.4);
    CHECK(rel_err(expm(a), taylor_expm(a)) < 1e-13);
  }
}

TEST_CASE("expm analytic cases") {
  SUBCASE("zero and identity") {
    CHECK(max_abs_diff(expm(Matrix::Zero(4, 4)), Matrix::Identity(4, 4)) == 0.0);
    CHECK(expm(Matrix::Identity(3, 3))(1, 1) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  }
  SUBCASE("nilpotent double integrator") {
    Matrix a(2, 2);
    a << 0, 1, 0, 0;
    Matrix want(2, 2);
    want << 1, 1, 0, 1;
    CHECK(max_abs_diff(expm(a), want) < 1e-15);
  }
  SUBCASE("rotation") {
    const double th = 0.7;
    Matrix a(2, 2);
    a << 0, -th, th, 0;
    Matrix want(2, 2);
    want << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    CHECK(max_abs_diff(expm(a), want) < 1e-15);
  }
  SUBCASE("large diagonal") {
    Matrix a = Vector::LinSpaced(4, -30.0, 5.0).asDiagonal();
    const Matrix e = expm(a);
    for (int i = 0; i < 4; ++i) {
      CHECK(e(i, i) == doctest::Approx(std::exp(a(i, i))).epsilon(1e-13));
    }
  }
  SUBCASE("non-square is rejected") {
    CHECK(error_code_of([] { expm(Matrix::Zero(2, 3)); }) == Errc::structural);
  }
}

TEST_CASE("expm is the same under both kernel tables") {
  Rng rng(23);
  const Matrix a = random_matrix(rng, 17, 17, 0.6);
  const kernels::Isa before = kernels::active().isa;
  kernels::select(kernels::Isa::scalar);
  const Matrix slow = expm(a);
  kernels::select(kernels::Isa::avx2);
  const Matrix fast = expm(a);
  kernels::select(before);
  CHECK(rel_err(fast, slow) < 1e-13);
}

TEST_CASE("multiply and apply agree with Eigen") {
  Rng rng(24);
  const Matrix a = random_matrix(rng, 9, 5);
  const Matrix b = random_matrix(rng, 5, 7);
  const Vector x = random_vector(rng, 5);
  CHECK(max_abs_diff(multiply(a, b), a * b) < 1e-13);
  CHECK((apply(a, x) - a * x).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(error_code_of([&] { multiply(a, a); }) == Errc::structural);
}

TEST_CASE("norms") {
  Matrix a(2, 3);
  a << 1, -2, 3, -4, 0, 0.5;
  CHECK(inf_norm(a) == 6.0);
  CHECK(one_norm(a) == 5.0);
  Vector v(3);
  v << -7, 2, 3;
  CHECK(inf_norm(v) == 7.0);
}

TEST_CASE("irreducible blocks of a block-triangular matrix") {
  // 0 <-> 1 form a cycle; 2 depends on 1; 3 is isolated.
  Matrix a = Matrix::Zero(4, 4);
  a(0, 1) = 1;
  a(1, 0) = 1;
  a(2, 1) = 1;
  auto blocks = irreducible_blocks(a);
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end());
  REQUIRE(blocks.size() == 3);
  CHECK(blocks[0] == std::vector<Eigen::Index>{0, 1});
  CHECK(blocks[1] == std::vector<Eigen::Index>{2});
  CHECK(blocks[2] == std::vector<Eigen::Index>{3});
}

TEST_CASE("eigenvalues of a long Jordan chain stay exact") {
  // Lower bidiagonal with equal diagonal: a defective 60-chain. A dense QR
  // would scatter these by eps^(1/60).
  const int n = 60;
  Matrix a = -1.5 * Matrix::Identity(n, n);
  for (int i = 1; i < n; ++i) a(i, i - 1) = 1.0;
  for (const Complex& z : eigenvalues(a)) {
    CHECK(std::abs(z - Complex(-1.5, 0.0)) < 1e-12);
  }
}

TEST_CASE("eigenvalues are sorted and match Eigen on irreducible input") {
  Rng rng(25);
  const Matrix a = random_matrix(rng, 8, 8);
  const ComplexList got = eigenvalues(a);
  Eigen::EigenSolver<Matrix> es(a);
  ComplexList want(es.eigenvalues().data(), es.eigenvalues().data() + 8);
  CHECK(pairing_distance(got, want) < 1e-10);
  for (std::size_t i = 1; i < got.size(); ++i) {
    CHECK(std::make_pair(got[i - 1].real(), got[i - 1].imag()) <=
          std::make_pair(got[i].real(), got[i].imag()));
  }
}

TEST_CASE("numerical rank") {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 1;
  a(1, 1) = 1e-3;
  CHECK(numerical_rank(a, 1e-9).rank == 2);
  a(2, 2) = 1e-10;
  const RankDecision d = numerical_rank(a, 1e-9);
  CHECK(d.rank == 2);
  CHECK(d.ambiguous);
  CHECK(numerical_rank(Matrix::Zero(2, 2), 1e-9).rank == 0);
}

TEST_CASE("pairing distance") {
  const ComplexList a = {{0, 0}, {1, 1}, {1, -1}};
  const ComplexList b = {{1, -1}, {0, 1e-9}, {1, 1}};
  CHECK(pairing_distance(a, b) == doctest::Approx(1e-9));
  CHECK(std::isinf(pairing_distance(a, {{0, 0}})));
  CHECK(pairing_distance({}, {}) == 0.0);
}
