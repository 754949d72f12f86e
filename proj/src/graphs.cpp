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

#include "serialcon/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "serialcon/error.hpp"
#include "serialcon/linalg.hpp"

namespace serialcon {

WeightedDigraph::WeightedDigraph(Matrix weights) : weights_(std::move(weights)) {
  if (weights_.rows() < 1 || weights_.rows() != weights_.cols()) {
    throw Error(Errc::invalid_size,
                "adjacency matrix must be square with at least one vertex");
  }
  const Eigen::Index n = weights_.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double w = weights_(i, j);
      if (!std::isfinite(w) || w < 0.0) {
        std::ostringstream msg;
        msg << "edge weight (" << i + 1 << ", " << j + 1
            << ") must be finite and nonnegative, got " << w;
        throw Error(Errc::domain, msg.str());
      }
      if (i == j && w != 0.0) {
        std::ostringstream msg;
        msg << "self-loop weight at vertex " << i + 1 << " must be zero";
        throw Error(Errc::domain, msg.str());
      }
    }
  }
  // Normalize -0.0 so exported edge lists never print "-0".
  weights_ = weights_.cwiseMax(0.0);
}

WeightedDigraph WeightedDigraph::empty(Eigen::Index n) {
  return WeightedDigraph(Matrix::Zero(n, n));
}

LaplacianMatrix::LaplacianMatrix(Matrix entries,
                                 std::optional<double> rowsum_tol)
    : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
    throw Error(Errc::invalid_size, "Laplacian must be square and nonempty");
  }
  if (!entries_.allFinite()) {
    throw Error(Errc::domain, "Laplacian has non-finite entries");
  }
  const Eigen::Index n = entries_.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = entries_(i, j);
      if ((i == j && v < 0.0) || (i != j && v > 0.0)) {
        std::ostringstream msg;
        msg << "entry (" << i + 1 << ", " << j + 1 << ") = " << v
            << " violates the Laplacian sign pattern";
        throw Error(Errc::domain, msg.str());
      }
    }
  }
  const double tol = rowsum_tol.value_or(default_rowsum_tol(n));
  const double residual = rowsum_residual();
  if (residual > tol) {
    std::ostringstream msg;
    msg << "Laplacian row sums deviate from zero by " << residual
        << " (tolerance " << tol << ")";
    throw Error(Errc::domain, msg.str());
  }
}

LaplacianMatrix LaplacianMatrix::zero(Eigen::Index n) {
  return LaplacianMatrix(Matrix::Zero(n, n));
}

double LaplacianMatrix::rowsum_residual() const {
  return entries_.rowwise().sum().cwiseAbs().maxCoeff();
}

WeightedDigraph LaplacianMatrix::graph() const {
  Matrix w = -entries_;
  w.diagonal().setZero();
  return WeightedDigraph(std::move(w));
}

LaplacianMatrix LaplacianMatrix::scaled(double gain) const {
  if (!(gain >= 0.0) || !std::isfinite(gain)) {
    throw Error(Errc::domain, "Laplacian gain must be finite and nonnegative");
  }
  return LaplacianMatrix(entries_ * gain);
}

LaplacianMatrix operator+(const LaplacianMatrix& a, const LaplacianMatrix& b) {
  if (a.size() != b.size()) {
    throw Error(Errc::structural, "Laplacian sum: dimension mismatch");
  }
  return LaplacianMatrix(a.matrix() + b.matrix());
}

std::string_view to_string(Topology t) noexcept {
  switch (t) {
    case Topology::ahead_path:
      return "ahead_path";
    case Topology::behind_path:
      return "behind_path";
    case Topology::undir_path:
      return "undir_path";
    case Topology::ahead_cycle:
      return "ahead_cycle";
  }
  return "unknown";
}

Topology parse_topology(std::string_view id) {
  for (Topology t : {Topology::ahead_path, Topology::behind_path,
                     Topology::undir_path, Topology::ahead_cycle}) {
    if (to_string(t) == id) return t;
  }
  throw Error(Errc::config, "unknown topology id '" + std::string(id) + "'");
}

WeightedDigraph build_named_topology(Topology kind, Eigen::Index n) {
  if (n < 2) {
    std::ostringstream msg;
    msg << "topology " << to_string(kind) << " needs n >= 2, got " << n;
    throw Error(Errc::invalid_size, msg.str());
  }
  Matrix w = Matrix::Zero(n, n);
  switch (kind) {
    case Topology::ahead_path:
      for (Eigen::Index i = 1; i < n; ++i) w(i, i - 1) = 1.0;
      break;
    case Topology::behind_path:
      for (Eigen::Index i = 0; i + 1 < n; ++i) w(i, i + 1) = 1.0;
      break;
    case Topology::undir_path:
      for (Eigen::Index i = 1; i < n; ++i) w(i, i - 1) = w(i - 1, i) = 1.0;
      break;
    case Topology::ahead_cycle:
      for (Eigen::Index i = 0; i < n; ++i) w(i, (i + n - 1) % n) = 1.0;
      break;
  }
  return WeightedDigraph(std::move(w));
}

LaplacianMatrix laplacian_of(const WeightedDigraph& g) {
  const Matrix& w = g.weights();
  Matrix l = -w;
  // Summing the row directly keeps each row sum exactly zero up to the
  // rounding of one n-term sum.
  l.diagonal() = w.rowwise().sum();
  return LaplacianMatrix(std::move(l));
}

SpanningTreeResult has_connected_spanning_tree(const WeightedDigraph& g) {
  const Eigen::Index n = g.size();
  // followers[u]: vertices i with w(i, u) > 0, i.e. that listen to u.
  std::vector<std::vector<Eigen::Index>> followers(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index u = 0; u < n; ++u) {
      if (g.has_edge(i, u)) followers[u].push_back(i);
    }
  }
  std::vector<char> seen(static_cast<std::size_t>(n));
  std::deque<Eigen::Index> queue;
  for (Eigen::Index root = 0; root < n; ++root) {
    std::fill(seen.begin(), seen.end(), 0);
    seen[root] = 1;
    queue.assign(1, root);
    Eigen::Index reached = 1;
    while (!queue.empty()) {
      const Eigen::Index u = queue.front();
      queue.pop_front();
      for (Eigen::Index v : followers[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          ++reached;
          queue.push_back(v);
        }
      }
    }
    if (reached == n) return {true, root};
  }
  return {false, std::nullopt};
}

std::vector<std::vector<bool>> hop_reachability(const WeightedDigraph& g,
                                                int hops) {
  const auto n = static_cast<std::size_t>(g.size());
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) reach[i][i] = true;
  // frontier expansion: reach_{k+1} = reach_k OR (reach_k * W) in the
  // boolean semiring.
  for (int step = 0; step < hops; ++step) {
    auto next = reach;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        if (!reach[i][k]) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (g.has_edge(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j))) {
            next[i][j] = true;
          }
        }
      }
    }
    if (next == reach) break;
    reach = std::move(next);
  }
  return reach;
}

std::string_view to_string(MembershipViolation::Reason r) noexcept {
  switch (r) {
    case MembershipViolation::Reason::sparsity:
      return "sparsity";
    case MembershipViolation::Reason::row_sum:
      return "row_sum";
    case MembershipViolation::Reason::gain:
      return "gain";
  }
  return "unknown";
}

FeedbackClassCertificate check_membership(const Matrix& a,
                                          const WeightedDigraph& g, int hops,
                                          double gain,
                                          const MembershipOptions& opts) {
  if (a.rows() != a.cols() || a.rows() != g.size()) {
    throw Error(Errc::structural,
                "check_membership: matrix and graph dimensions differ");
  }
  if (hops < 0) throw Error(Errc::domain, "hop count must be nonnegative");
  if (!(gain > 0.0)) throw Error(Errc::domain, "gain bound must be positive");

  FeedbackClassCertificate cert;
  cert.hops = hops;
  cert.gain_bound = gain;
  const Eigen::Index n = a.rows();
  using Reason = MembershipViolation::Reason;

  // Structural clause: exact zeros are required outside the pattern. Entries
  // outside it are sums of exact zero products, so no tolerance applies.
  const auto reach = hop_reachability(g, hops);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!reach[i][j] && a(i, j) != 0.0) {
        cert.violations.push_back({i, j, Reason::sparsity, a(i, j)});
      }
    }
  }

  const double tol = opts.rowsum_tol.value_or(default_rowsum_tol(n));
  const Vector row_sums = a.rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(row_sums[i]) > tol) {
      cert.violations.push_back({i, -1, Reason::row_sum, row_sums[i]});
    }
  }

  const double norm = inf_norm(a);
  if (norm > gain * (1.0 + opts.gain_rel_tol)) {
    cert.violations.push_back({-1, -1, Reason::gain, norm});
  }

  cert.holds = cert.violations.empty();
  return cert;
}

ClosureCertificates hop_sparsity_closure_demo(const LaplacianMatrix& l1,
                                              const LaplacianMatrix& l2,
                                              const WeightedDigraph& g,
                                              double gain) {
  if (l1.size() != g.size() || l2.size() != g.size()) {
    throw Error(Errc::structural, "closure demo: dimension mismatch");
  }
  if (!check_membership(l1.matrix(), g, 1, gain).holds) {
    throw Error(Errc::precondition,
                "closure demo: L1 is not 1-step implementable at the given gain");
  }
  if (!check_membership(l2.matrix(), g, 1, gain).holds) {
    throw Error(Errc::precondition,
                "closure demo: L2 is not 1-step implementable at the given gain");
  }
  ClosureCertificates out;
  const Matrix sum = l2.matrix() + l1.matrix();
  const Matrix product = multiply(l2.matrix(), l1.matrix());
  out.sum = check_membership(sum, g, 1, 2.0 * gain);
  out.product = check_membership(product, g, 2, std::max(2.0 * gain, gain * gain));
  if (!out.sum.holds || !out.product.holds) {
    throw Error(Errc::internal_inconsistency,
                "closure demo: sum or product of certified inputs failed "
                "membership; this indicates a bug in the checker");
  }
  return out;
}

}  // namespace serialcon
