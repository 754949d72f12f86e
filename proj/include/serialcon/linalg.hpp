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

#include "serialcon/types.hpp"

namespace serialcon {

// Dense products routed through the active SIMD kernel table.
Matrix multiply(const Matrix& a, const Matrix& b);
Vector apply(const Matrix& a, const Vector& x);

// Induced infinity norm: max absolute row sum.
double inf_norm(const Matrix& a);
double inf_norm(const Vector& x);
// Induced 1-norm: max absolute column sum.
double one_norm(const Matrix& a);

// exp(a) by scaling and squaring with a degree-13 Pade approximant
// (Higham's 2005 variant, degree selected from the 1-norm).
Matrix expm(const Matrix& a);

// Eigenvalues with multiplicity, sorted by (real, imag).
//
// The matrix is first split into the irreducible diagonal blocks of its
// block-triangular (Frobenius) form, found from the strongly connected
// components of its sparsity graph, and each block is handed to a dense
// eigensolver separately. Strings and other acyclic topologies then give
// exact eigenvalues instead of the eps^(1/k) scatter a dense solver
// produces on long Jordan chains.
//
// Throws Error(numerical_failure) if a block fails to converge.
ComplexList eigenvalues(const Matrix& a);

// Strongly connected components of the pattern {(i, j) : a(i, j) != 0},
// in an order that makes the permuted matrix block lower triangular.
std::vector<std::vector<Eigen::Index>> irreducible_blocks(const Matrix& a);

struct RankDecision {
  Eigen::Index rank = 0;
  double threshold = 0.0;
  // Some singular value sits within a factor of 100 of the threshold.
  bool ambiguous = false;
};

// Singular values at or below rel_tol * sigma_max count as zero.
RankDecision numerical_rank(const Matrix& a, double rel_tol);

// Greedy nearest-pair matching between two multisets of equal size: the
// globally closest unmatched pair is fixed first. Returns the largest
// distance among matched pairs, or +inf if the sizes differ.
double pairing_distance(const ComplexList& a, const ComplexList& b);

}  // namespace serialcon
