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

#include <random>

#include "serialcon/graphs.hpp"

namespace serialcon {

using Rng = std::mt19937_64;

// Weight uniform on (0, 1].
double random_weight(Rng& rng);

// Each ordered pair (i != j) is an edge with probability edge_prob.
WeightedDigraph random_digraph(Rng& rng, Eigen::Index n, double edge_prob);

// A random rooted spanning tree (information flowing away from a random
// root) overlaid with independent extra edges, so a connected spanning tree
// always exists.
WeightedDigraph random_connected_digraph(Rng& rng, Eigen::Index n,
                                         double edge_prob);

// Rows scaled down where needed so that ||L||_inf <= gain.
LaplacianMatrix clamp_gain(const LaplacianMatrix& l, double gain);

// Random Laplacian whose edges are a subset of pattern's edges (each kept
// with probability keep_prob, fresh weights on (0, 1]), clamped to gain.
// The result is in the 1-step class of pattern with that gain.
LaplacianMatrix random_laplacian_on(Rng& rng, const WeightedDigraph& pattern,
                                    double gain, double keep_prob = 0.7);

}  // namespace serialcon
