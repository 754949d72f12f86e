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

#include "serialcon/random.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "serialcon/error.hpp"
#include "serialcon/linalg.hpp"

namespace serialcon {

double random_weight(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return 1.0 - u(rng);
}

WeightedDigraph random_digraph(Rng& rng, Eigen::Index n, double edge_prob) {
  std::bernoulli_distribution coin(edge_prob);
  Matrix w = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && coin(rng)) w(i, j) = random_weight(rng);
    }
  }
  return WeightedDigraph(std::move(w));
}

WeightedDigraph random_connected_digraph(Rng& rng, Eigen::Index n,
                                         double edge_prob) {
  Matrix w = random_digraph(rng, n, edge_prob).weights();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  // order[0] is the root; every later vertex listens to an earlier one.
  for (std::size_t k = 1; k < order.size(); ++k) {
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    const Eigen::Index parent = order[pick(rng)];
    const Eigen::Index child = order[k];
    if (w(child, parent) == 0.0) w(child, parent) = random_weight(rng);
  }
  return WeightedDigraph(std::move(w));
}

LaplacianMatrix clamp_gain(const LaplacianMatrix& l, double gain) {
  if (!(gain > 0.0)) throw Error(Errc::domain, "gain must be positive");
  Matrix m = l.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double row_norm = m.row(i).cwiseAbs().sum();
    if (row_norm > gain) {
      m.row(i) *= gain / row_norm;
      // Re-derive the diagonal so the row sum stays exactly balanced.
      m(i, i) = 0.0;
      m(i, i) = -m.row(i).sum();
    }
  }
  return LaplacianMatrix(std::move(m));
}

LaplacianMatrix random_laplacian_on(Rng& rng, const WeightedDigraph& pattern,
                                    double gain, double keep_prob) {
  std::bernoulli_distribution keep(keep_prob);
  const Eigen::Index n = pattern.size();
  Matrix w = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (pattern.has_edge(i, j) && keep(rng)) w(i, j) = random_weight(rng);
    }
  }
  return clamp_gain(laplacian_of(WeightedDigraph(std::move(w))), gain);
}

}  // namespace serialcon
