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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "serialcon/types.hpp"

namespace serialcon {

// Default row-sum tolerance scales with n: each row sum accumulates n
// rounding errors.
inline double default_rowsum_tol(Eigen::Index n) {
  return 1e-9 * static_cast<double>(n < 1 ? 1 : n);
}

// Directed, weighted communication topology. w(i, j) > 0 means agent i uses
// a relative measurement to agent j. Zero weights are absent edges.
class WeightedDigraph {
 public:
  // Throws Error(invalid_size) for an empty matrix and Error(domain) for
  // negative, non-finite or diagonal weights.
  explicit WeightedDigraph(Matrix weights);

  static WeightedDigraph empty(Eigen::Index n);

  Eigen::Index size() const { return weights_.rows(); }
  const Matrix& weights() const { return weights_; }
  double weight(Eigen::Index i, Eigen::Index j) const { return weights_(i, j); }
  bool has_edge(Eigen::Index i, Eigen::Index j) const {
    return weights_(i, j) > 0.0;
  }

 private:
  Matrix weights_;
};

class LaplacianMatrix {
 public:
  // Validates the Laplacian structure: zero row sums within tol,
  // nonpositive off-diagonals, nonnegative diagonal. Throws Error(domain).
  explicit LaplacianMatrix(Matrix entries,
                           std::optional<double> rowsum_tol = std::nullopt);

  static LaplacianMatrix zero(Eigen::Index n);

  Eigen::Index size() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  double operator()(Eigen::Index i, Eigen::Index j) const {
    return entries_(i, j);
  }

  // Max absolute row sum, i.e. max_i |(L 1)_i|.
  double rowsum_residual() const;

  // Adjacency implied by the off-diagonal pattern: w(i, j) = -L(i, j).
  WeightedDigraph graph() const;

  LaplacianMatrix scaled(double gain) const;

 private:
  Matrix entries_;
};

LaplacianMatrix operator+(const LaplacianMatrix& a, const LaplacianMatrix& b);

enum class Topology { ahead_path, behind_path, undir_path, ahead_cycle };

std::string_view to_string(Topology t) noexcept;
// Accepts the ids used in config files; throws Error(config) otherwise.
Topology parse_topology(std::string_view id);

// Unit-weight adjacency of a named topology. Throws Error(invalid_size) for
// n < 2.
WeightedDigraph build_named_topology(Topology kind, Eigen::Index n);

LaplacianMatrix laplacian_of(const WeightedDigraph& g);

struct SpanningTreeResult {
  bool exists = false;
  // Smallest 0-based root index that reaches every vertex.
  std::optional<Eigen::Index> root;
};

// True iff some vertex r reaches every other vertex when information flows
// from j to i along each edge w(i, j) > 0. This is the orientation in which
// the Laplacian has a simple zero eigenvalue: for the look-ahead string the
// leader (vertex 0) is the root.
SpanningTreeResult has_connected_spanning_tree(const WeightedDigraph& g);

// Boolean reach[i][j]: a directed walk of length <= hops from i to j exists
// in the adjacency pattern (including the trivial walk i == j).
std::vector<std::vector<bool>> hop_reachability(const WeightedDigraph& g,
                                                int hops);

struct MembershipViolation {
  enum class Reason { sparsity, row_sum, gain };
  Eigen::Index i = 0;  // -1 when the clause is not tied to an entry
  Eigen::Index j = 0;
  Reason reason = Reason::sparsity;
  double value = 0.0;
};

std::string_view to_string(MembershipViolation::Reason r) noexcept;

struct FeedbackClassCertificate {
  int hops = 0;
  double gain_bound = 0.0;
  bool holds = false;
  std::vector<MembershipViolation> violations;
};

struct MembershipOptions {
  std::optional<double> rowsum_tol;  // default_rowsum_tol(n)
  double gain_rel_tol = 1e-12;
};

// Checks whether a is a q-step implementable relative feedback with respect
// to g and gain c: sparsity inside the q-hop reachability pattern, zero row
// sums, and max absolute row sum <= c.
// Throws Error(structural) on dimension mismatch, Error(domain) for q < 0
// or c <= 0.
FeedbackClassCertificate check_membership(const Matrix& a,
                                          const WeightedDigraph& g, int hops,
                                          double gain,
                                          const MembershipOptions& opts = {});

struct ClosureCertificates {
  FeedbackClassCertificate sum;      // L2 + L1 at (1, 2c)
  FeedbackClassCertificate product;  // L2 * L1 at (2, max{2c, c^2})
};

// Certifies the closure of 1-step implementable Laplacians under the serial
// controller's sum and product. Throws Error(precondition) naming the input
// that is not in the (1, c) class, and Error(internal_inconsistency) if a
// certificate the closure result guarantees fails anyway.
ClosureCertificates hop_sparsity_closure_demo(const LaplacianMatrix& l1,
                                              const LaplacianMatrix& l2,
                                              const WeightedDigraph& g,
                                              double gain);

}  // namespace serialcon
