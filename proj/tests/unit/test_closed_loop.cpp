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
#include <numbers>
#include <sstream>

#include "serialcon/closed_loop.hpp"
#include "serialcon/linalg.hpp"
#include "test_util.hpp"

using namespace serialcon;
using namespace serialcon::test;

namespace {

// Roots of s^2 + b s + c for complex coefficients.
std::pair<Complex, Complex> quadratic_roots(Complex b, Complex c) {
  const Complex disc = std::sqrt(b * b - 4.0 * c);
  return {(-b + disc) / 2.0, (-b - disc) / 2.0};
}

}  // namespace

TEST_CASE("assemble: physical serial block structure") {
  const LaplacianMatrix l = named(Topology::ahead_path, 2);
  const ClosedLoopSystem sys =
      assemble(ControllerSpec::serial(l, 1.0, 1.0), Coordinates::physical);
  // [[0, I], [-L^2, -2L]] with L = [[0,0],[-1,1]], so L^2 = L.
  Matrix want(4, 4);
  want << 0, 0, 1, 0,
          0, 0, 0, 1,
          0, 0, 0, 0,
          1, -1, 2, -2;
  CHECK(max_abs_diff(sys.state_matrix(), want) == 0.0);
  Matrix b = Matrix::Zero(4, 2);
  b.bottomRows(2) = Matrix::Identity(2, 2);
  CHECK(sys.input_matrix() == b);
}

TEST_CASE("assemble: single vehicle and conventional cycle") {
  const ClosedLoopSystem one = assemble(
      ControllerSpec::serial(LaplacianMatrix::zero(1), LaplacianMatrix::zero(1)),
      Coordinates::physical);
  CHECK(one.state_matrix() == (Matrix(2, 2) << 0, 1, 0, 0).finished());

  const LaplacianMatrix lc = named(Topology::ahead_cycle, 3);
  const ClosedLoopSystem conv =
      assemble(ControllerSpec::conventional(lc, 2.5, 1.0), Coordinates::physical);
  CHECK(max_abs_diff(conv.state_matrix().bottomLeftCorner(3, 3), -lc.matrix()) == 0.0);
  CHECK(max_abs_diff(conv.state_matrix().bottomRightCorner(3, 3), -2.5 * lc.matrix()) == 0.0);

  CHECK(error_code_of([&] {
          assemble(ControllerSpec::conventional(lc, 2.5, 1.0), Coordinates::xi);
        }) == Errc::unsupported_coordinates);
}

TEST_CASE("assemble: xi coordinates") {
  const LaplacianMatrix l1 = named(Topology::ahead_path, 4).scaled(2.0);
  const LaplacianMatrix l2 = named(Topology::behind_path, 4).scaled(0.5);
  const ClosedLoopSystem sys = assemble(ControllerSpec::serial(l1, l2), Coordinates::xi);
  const Matrix& a = sys.state_matrix();
  CHECK(a.topLeftCorner(4, 4) == -l1.matrix());
  CHECK(a.topRightCorner(4, 4) == Matrix::Identity(4, 4));
  CHECK(a.bottomLeftCorner(4, 4) == Matrix::Zero(4, 4));
  CHECK(a.bottomRightCorner(4, 4) == -l2.matrix());
}

TEST_CASE("xi transforms") {
  const LaplacianMatrix l1 = named(Topology::ahead_path, 5).scaled(2.0);
  const ControllerSpec spec = ControllerSpec::serial(l1, named(Topology::ahead_path, 5));
  SUBCASE("consensus point") {
    Vector xi = Vector::Zero(10);
    xi.head(5).setOnes();
    const StateVector s = xi_to_physical(spec, xi);
    CHECK(s.x == ones(5));
    CHECK(s.v.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("leader impulse") {
    StateVector s{Vector::Zero(5), Vector::Zero(5)};
    s.v[0] = 1.0;
    const Vector xi = physical_to_xi(spec, s);
    CHECK(xi.head(5) == Vector::Zero(5));
    CHECK(xi.tail(5) == s.v);
  }
  SUBCASE("random round trip") {
    Rng rng(51);
    for (int trial = 0; trial < 20; ++trial) {
      const Vector xi = random_vector(rng, 10);
      const Vector back = physical_to_xi(spec, xi_to_physical(spec, xi));
      CHECK((back - xi).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("conventional has no xi form") {
    const ControllerSpec conv = ControllerSpec::conventional(l1, 1.0, 1.0);
    CHECK(error_code_of([&] { physical_to_xi(conv, {Vector::Zero(5), Vector::Zero(5)}); }) ==
          Errc::unsupported_coordinates);
  }
}

TEST_CASE("spectrum: circulant oracle") {
  const LaplacianMatrix lc = named(Topology::ahead_cycle, 4);
  const ComplexList got = spectrum(assemble(ControllerSpec::serial(lc, lc), Coordinates::physical));
  // Eigenvalues of L: 1 - exp(2 pi i k / 4), k = 0..3; the closed loop has
  // each of -lambda twice.
  ComplexList want;
  for (int rep = 0; rep < 2; ++rep) {
    for (int k = 0; k < 4; ++k) {
      want.push_back(-(1.0 - std::polar(1.0, 2.0 * std::numbers::pi * k / 4.0)));
    }
  }
  CHECK(pairing_distance(got, want) < 1e-7);
}

TEST_CASE("spectrum: per-mode quadratic oracle for conventional path") {
  const LaplacianMatrix l = named(Topology::ahead_path, 3);
  const ComplexList got =
      spectrum(assemble(ControllerSpec::conventional(l, 2.5, 1.0), Coordinates::physical));
  ComplexList want;
  for (double lambda : {0.0, 1.0, 1.0}) {
    const auto [r1, r2] = quadratic_roots(2.5 * lambda, lambda);
    want.push_back(r1);
    want.push_back(r2);
  }
  CHECK(pairing_distance(got, want) < 1e-9);
}

TEST_CASE("spectrum: double integrator") {
  const ComplexList got = spectrum(assemble(
      ControllerSpec::serial(LaplacianMatrix::zero(1), LaplacianMatrix::zero(1)),
      Coordinates::physical));
  CHECK(pairing_distance(got, {{0, 0}, {0, 0}}) == 0.0);
}

TEST_CASE("property: physical and xi spectra agree") {
  Rng rng(52);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 2 + trial % 9;
    const LaplacianMatrix l1 = laplacian_of(random_connected_digraph(rng, n, 0.4));
    const LaplacianMatrix l2 = laplacian_of(random_connected_digraph(rng, n, 0.4));
    const ControllerSpec spec = ControllerSpec::serial(l1, l2);
    CHECK(pairing_distance(spectrum(assemble(spec, Coordinates::physical)),
                           spectrum(assemble(spec, Coordinates::xi))) < 1e-8);
  }
}

TEST_CASE("classify_stability") {
  SUBCASE("serial on a cycle") {
    const auto rep = classify_stability(
        assemble(ControllerSpec::serial(named(Topology::ahead_cycle, 10), 2.0, 0.5),
                 Coordinates::physical));
    CHECK(rep.consensus_stable);
    CHECK(rep.zero_eigenvalue_count == 2);
    CHECK(rep.jordan_block_of_two);
    CHECK(rep.rank_a == 19);
    CHECK(rep.rank_a2 == 18);
    CHECK(rep.max_nonzero_real_part < 0);
  }
  SUBCASE("conventional on a large cycle goes unstable") {
    const int n = 100;
    const auto rep = classify_stability(
        assemble(ControllerSpec::conventional(named(Topology::ahead_cycle, n), 2.5, 1.0),
                 Coordinates::physical));
    CHECK_FALSE(rep.consensus_stable);
    CHECK(rep.max_nonzero_real_part > 0);
    // Oracle: some mode of s^2 + 2.5 lambda s + lambda has a RHP root.
    double worst = -1.0;
    for (int k = 1; k < n; ++k) {
      const Complex lambda = 1.0 - std::polar(1.0, 2.0 * std::numbers::pi * k / n);
      const auto [r1, r2] = quadratic_roots(2.5 * lambda, lambda);
      worst = std::max({worst, r1.real(), r2.real()});
    }
    CHECK(worst > 0);
    CHECK(rep.max_nonzero_real_part == doctest::Approx(worst).epsilon(1e-6));
  }
  SUBCASE("conventional on a small cycle is stable") {
    CHECK(classify_stability(
              assemble(ControllerSpec::conventional(named(Topology::ahead_cycle, 10), 2.5, 1.0),
                       Coordinates::physical))
              .consensus_stable);
  }
  SUBCASE("disconnected L1") {
    Matrix w = Matrix::Zero(4, 4);
    w(0, 1) = w(1, 0) = w(2, 3) = w(3, 2) = 1;
    const LaplacianMatrix split = laplacian_of(WeightedDigraph(w));
    const auto rep = classify_stability(
        assemble(ControllerSpec::serial(split, named(Topology::ahead_cycle, 4)),
                 Coordinates::physical));
    CHECK_FALSE(rep.consensus_stable);
    CHECK(rep.zero_eigenvalue_count == 3);
  }
  SUBCASE("free vehicle") {
    const auto rep = classify_stability(assemble(
        ControllerSpec::serial(LaplacianMatrix::zero(1), LaplacianMatrix::zero(1)),
        Coordinates::physical));
    CHECK(rep.consensus_stable);
  }
  SUBCASE("long defective path is still stable") {
    CHECK(classify_stability(
              assemble(ControllerSpec::conventional(named(Topology::ahead_path, 100), 2.5, 1.0),
                       Coordinates::physical))
              .consensus_stable);
  }
}

TEST_CASE("matrix dump") {
  const ClosedLoopSystem sys = assemble(
      ControllerSpec::serial(LaplacianMatrix::zero(1), LaplacianMatrix::zero(1)),
      Coordinates::physical);
  std::ostringstream out;
  write_matrix_dump(out, sys);
  CHECK(out.str() == "# coords physical agents 1\nA 2 2\n0 1\n0 0\nB 2 1\n0\n1\n");
}
