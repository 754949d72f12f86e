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

#include <ostream>
#include <string_view>

#include "serialcon/controllers.hpp"
#include "serialcon/types.hpp"

namespace serialcon {

enum class Coordinates { physical, xi };

std::string_view to_string(Coordinates c) noexcept;

// 2n-dimensional closed loop  d/dt z = A z + B u_ref.
//
// physical: z = (x, v),   A = [[0, I], [-A0, -A1]]
// xi:       z = (xi1, xi2) = (x, v + L1 x),  A = [[-L1, I], [0, -L2]]
//
// B feeds u_ref into the lower block in both coordinate systems.
class ClosedLoopSystem {
 public:
  Eigen::Index agents() const { return spec_.size(); }
  const Matrix& state_matrix() const { return a_; }
  const Matrix& input_matrix() const { return b_; }
  // Constant input from synthesis (offset compensation plus feedforward).
  const Vector& input() const { return u_ref_; }
  Coordinates coordinates() const { return coords_; }
  const ControllerSpec& spec() const { return spec_; }

  // Stacks a state into this system's coordinates, and back.
  Vector to_coordinates(const StateVector& s) const;
  StateVector from_coordinates(const Vector& z) const;

 private:
  friend ClosedLoopSystem assemble(const ControllerSpec&, Coordinates);
  ClosedLoopSystem(ControllerSpec spec, Coordinates coords, Matrix a, Matrix b,
                   Vector u_ref);

  ControllerSpec spec_;
  Coordinates coords_;
  Matrix a_;
  Matrix b_;
  Vector u_ref_;
};

// Throws Error(unsupported_coordinates) for xi with a conventional spec.
ClosedLoopSystem assemble(const ControllerSpec& spec, Coordinates coords);

// x = xi1, v = -L1 xi1 + xi2, and the inverse. L1 is the spec's first
// Laplacian. Throws Error(unsupported_coordinates) for conventional specs and
// Error(structural) on length mismatch.
StateVector xi_to_physical(const ControllerSpec& spec, const Vector& xi);
Vector physical_to_xi(const ControllerSpec& spec, const StateVector& s);

ComplexList spectrum(const ClosedLoopSystem& sys);

struct StabilityReport {
  bool consensus_stable = false;
  // Largest real part among eigenvalues outside the zero cluster; -inf if
  // every eigenvalue is in the cluster.
  double max_nonzero_real_part = 0.0;
  int zero_eigenvalue_count = 0;
  Eigen::Index rank_a = 0;
  Eigen::Index rank_a2 = 0;
  bool jordan_block_of_two = false;
  // A rank decision sat close to its threshold; treat the verdict with care.
  bool rank_ambiguous = false;
  double zero_tolerance = 0.0;
};

struct StabilityOptions {
  double zero_rel_tol = 1e-7;  // times ||A||_inf
  double rank_rel_tol = 1e-9;  // times sigma_max
};

// Consensus-stable means: exactly two eigenvalues in the zero cluster,
// forming one Jordan block of size two (rank A = 2n-1, rank A^2 = 2n-2), and
// every other eigenvalue strictly in the open left half plane.
StabilityReport classify_stability(const ClosedLoopSystem& sys,
                                   const StabilityOptions& opts = {});

// Row-major "%.17g" dump of A and B, preceded by a one-line header.
void write_matrix_dump(std::ostream& out, const ClosedLoopSystem& sys);

}  // namespace serialcon
