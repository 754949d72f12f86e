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

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "serialcon/closed_loop.hpp"
#include "serialcon/simulate.hpp"

namespace serialcon {

// Transient-bound constant of the scalar-gain serial design:
//   alpha = (p1 + p2 + max{2, 2 p1 p2}) / |p1 - p2|.
// Throws Error(domain) for non-positive gains and
// Error(degenerate_parameters) for p1 == p2.
double alpha_of(double p1, double p2);

struct ErrorPair {
  Vector ep;
  Vector ev;
};

// Closed-form initial-value response of the serial design with
// L1 = p1 L, L2 = p2 L, from the two exponentials exp(-p1 L t) and
// exp(-p2 L t). Throws like alpha_of for bad gains.
ErrorPair closed_form_errors(const LaplacianMatrix& laplacian, double p1,
                             double p2, const Vector& ep0, const Vector& ev0,
                             double t);

inline constexpr double kBoundTolerance = 1e-6;

struct PerformanceReport {
  std::optional<double> alpha_bound;
  double observed_ratio = 0.0;
  std::optional<bool> bound_satisfied;
  double time_of_peak = 0.0;
  double initial_norm = 0.0;
  double peak_norm = 0.0;
  // Zero initial error but a nonzero response: the ratio is undefined.
  bool indeterminate = false;
  bool overflow = false;
  // The sup is over the simulated horizon only.
  double horizon = 0.0;
  // Peak value was re-evaluated between grid points.
  bool peak_refined = false;
};

struct PerformanceOptions {
  double zero_tol = 1e-12;
  // Sub-samples per grid interval on each side of the grid peak.
  int refine_points = 16;
};

// Stacked sup-norm of (e_p, e_v) over the trajectory relative to its initial
// value, with the grid peak refined by exact sub-stepping (and, for
// scalar-gain serial specs measured on their own Laplacian, also through
// closed_form_errors). alpha_bound is set for scalar-gain serial specs with
// p1 != p2.
PerformanceReport evaluate_performance(const Trajectory& traj,
                                       const ControllerSpec& spec,
                                       const LaplacianMatrix& metric,
                                       const PerformanceOptions& opts = {});

struct SweepCase {
  ControllerSpec spec;
  LaplacianMatrix metric;
  StateVector init;
};

struct SweepRow {
  Eigen::Index agents = 0;
  std::optional<double> alpha;
  std::optional<PerformanceReport> report;
  std::optional<StabilityReport> stability;
  Trajectory trajectory;
  std::string error;  // empty on success
};

struct SweepOptions {
  IntegrationOptions integration;
  bool keep_trajectories = false;
  bool parallel = false;
};

// Runs one simulation and analysis per N. A failure in one row is recorded
// in SweepRow::error and the sweep continues.
std::vector<SweepRow> sweep(const std::vector<Eigen::Index>& agent_counts,
                            const std::function<SweepCase(Eigen::Index)>& make,
                            const SweepOptions& opts);

}  // namespace serialcon
