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
#include <vector>

#include "serialcon/closed_loop.hpp"
#include "serialcon/types.hpp"

namespace serialcon {

// Error signals e_p = d + L x and e_v = v - v_ref 1 measured over a metric
// Laplacian L, which need not be one of the controller's Laplacians.
struct ErrorMetric {
  Matrix laplacian;
  Vector d;
  double v_ref = 0.0;

  // d = -L p for the spec's offsets p, so e_p vanishes on the desired
  // formation; v_ref is taken from the spec.
  static ErrorMetric for_spec(const ControllerSpec& spec,
                              const LaplacianMatrix& metric);

  Vector position_error(const Vector& x) const;
  Vector velocity_error(const Vector& v) const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<Vector> ep;
  std::vector<Vector> ev;
  // Running max of ||[e_p; e_v]||_inf up to and including each sample.
  std::vector<double> sup_norm_running;
  // Set when propagation stopped at a non-finite state or one exceeding the
  // magnitude ceiling; samples end just before it.
  bool overflow = false;
  double overflow_time = 0.0;
  ErrorMetric metric;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
};

struct IntegrationOptions {
  double horizon = 30.0;
  double dt = 0.02;
  double magnitude_ceiling = 1e12;
};

// Exact LTI propagation on a uniform grid: each step applies exp(A dt) and
// the input integral from one exponential of the augmented matrix
// [[A, B u], [0, 0]]. Samples are at k * dt, with a shorter final step when
// dt does not divide the horizon.
//
// Throws Error(domain) for non-positive horizon or dt, Error(structural) if
// init does not match the system.
Trajectory integrate(const ClosedLoopSystem& sys, const StateVector& init,
                     const IntegrationOptions& opts, const ErrorMetric& metric);

// Propagator for one fixed step; reused by the peak refinement.
struct StepPropagator {
  Matrix transition;  // exp(A dt)
  Vector forced;      // int_0^dt exp(A s) ds B u

  StepPropagator(const ClosedLoopSystem& sys, double dt);
  Vector step(const Vector& z) const;
};

// "t,x_1..x_n,v_1..v_n,ep_1..ep_n,ev_1..ev_n" with %.10g values.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace serialcon
