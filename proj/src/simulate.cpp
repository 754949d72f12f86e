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

#include "serialcon/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <span>

#include "serialcon/error.hpp"
#include "serialcon/kernels.hpp"
#include "serialcon/linalg.hpp"

namespace serialcon {

namespace {

double stacked_norm(const Vector& ep, const Vector& ev) {
  return std::max(inf_norm(ep), inf_norm(ev));
}

void append_sample(Trajectory& traj, double t, StateVector s) {
  Vector ep = traj.metric.position_error(s.x);
  Vector ev = traj.metric.velocity_error(s.v);
  const double norm = stacked_norm(ep, ev);
  const double prev = traj.sup_norm_running.empty()
                          ? 0.0
                          : traj.sup_norm_running.back();
  traj.times.push_back(t);
  traj.states.push_back(std::move(s));
  traj.ep.push_back(std::move(ep));
  traj.ev.push_back(std::move(ev));
  traj.sup_norm_running.push_back(std::max(prev, norm));
}

}  // namespace

ErrorMetric ErrorMetric::for_spec(const ControllerSpec& spec,
                                  const LaplacianMatrix& metric) {
  if (metric.size() != spec.size()) {
    throw Error(Errc::structural, "metric Laplacian size differs from spec");
  }
  return {metric.matrix(), -apply(metric.matrix(), spec.offsets()),
          spec.v_ref()};
}

Vector ErrorMetric::position_error(const Vector& x) const {
  return d + apply(laplacian, x);
}

Vector ErrorMetric::velocity_error(const Vector& v) const {
  return v.array() - v_ref;
}

StepPropagator::StepPropagator(const ClosedLoopSystem& sys, double dt) {
  const Eigen::Index dim = sys.state_matrix().rows();
  Matrix augmented = Matrix::Zero(dim + 1, dim + 1);
  augmented.topLeftCorner(dim, dim) = sys.state_matrix() * dt;
  augmented.topRightCorner(dim, 1) =
      apply(sys.input_matrix(), sys.input()) * dt;
  const Matrix e = expm(augmented);
  transition = e.topLeftCorner(dim, dim);
  forced = e.topRightCorner(dim, 1);
}

Vector StepPropagator::step(const Vector& z) const {
  Vector next = apply(transition, z);
  const auto n = static_cast<std::size_t>(next.size());
  kernels::active().axpy(1.0, {forced.data(), n}, {next.data(), n});
  return next;
}

Trajectory integrate(const ClosedLoopSystem& sys, const StateVector& init,
                     const IntegrationOptions& opts,
                     const ErrorMetric& metric) {
  if (!(opts.horizon > 0.0) || !(opts.dt > 0.0) ||
      !std::isfinite(opts.horizon) || !std::isfinite(opts.dt)) {
    throw Error(Errc::domain, "horizon and dt must be positive and finite");
  }
  const Eigen::Index n = sys.agents();
  if (init.x.size() != n || init.v.size() != n) {
    throw Error(Errc::structural, "initial state does not match the system");
  }
  if (metric.laplacian.rows() != n || metric.d.size() != n) {
    throw Error(Errc::structural, "error metric does not match the system");
  }

  Trajectory traj;
  traj.metric = metric;
  const auto full_steps =
      static_cast<long long>(std::floor(opts.horizon / opts.dt + 1e-9));
  const double covered = static_cast<double>(full_steps) * opts.dt;
  const bool tail = opts.horizon - covered > 1e-12 * opts.horizon;
  traj.times.reserve(static_cast<std::size_t>(full_steps) + 2);

  append_sample(traj, 0.0, init);
  Vector z = sys.to_coordinates(init);
  const StepPropagator prop(sys, opts.dt);

  auto advance = [&](const StepPropagator& p, double t) {
    Vector next = p.step(z);
    const double mag = kernels::active().max_abs(
        {next.data(), static_cast<std::size_t>(next.size())});
    if (!(mag <= opts.magnitude_ceiling)) {
      traj.overflow = true;
      traj.overflow_time = t;
      return false;
    }
    z = std::move(next);
    append_sample(traj, t, sys.from_coordinates(z));
    return true;
  };

  for (long long k = 1; k <= full_steps; ++k) {
    if (!advance(prop, static_cast<double>(k) * opts.dt)) return traj;
  }
  if (tail) {
    const StepPropagator last(sys, opts.horizon - covered);
    advance(last, opts.horizon);
  }
  return traj;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const Eigen::Index n = traj.metric.laplacian.rows();
  out << 't';
  for (const char* prefix : {"x_", "v_", "ep_", "ev_"}) {
    for (Eigen::Index i = 1; i <= n; ++i) out << ',' << prefix << i;
  }
  out << '\n';
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.10g", v + 0.0);
    out << ',' << buf;
  };
  for (std::size_t k = 0; k < traj.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.10g", traj.times[k]);
    out << buf;
    for (const Vector* v : {&traj.states[k].x, &traj.states[k].v, &traj.ep[k],
                            &traj.ev[k]}) {
      for (Eigen::Index i = 0; i < n; ++i) put((*v)[i]);
    }
    out << '\n';
  }
}

}  // namespace serialcon
