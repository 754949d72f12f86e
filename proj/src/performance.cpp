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

#include "serialcon/performance.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "serialcon/error.hpp"
#include "serialcon/linalg.hpp"

namespace serialcon {

namespace {

void check_gains(double p1, double p2) {
  if (!(p1 > 0.0) || !(p2 > 0.0) || !std::isfinite(p1) ||
      !std::isfinite(p2)) {
    throw Error(Errc::domain, "serial gains must be positive and finite");
  }
  if (p1 == p2) {
    throw Error(Errc::degenerate_parameters,
                "serial gains must differ (p1 == p2 has a repeated root)");
  }
}

double stacked_norm(const Vector& ep, const Vector& ev) {
  return std::max(inf_norm(ep), inf_norm(ev));
}

// Closed-form evaluation is only valid for the scalar-gain serial design
// measured on its own base Laplacian with no extra feedforward.
const ScalarGains* closed_form_gains(const ControllerSpec& spec,
                                     const LaplacianMatrix& metric) {
  const auto& gains = spec.scalar_gains();
  if (spec.kind() != ControllerKind::serial || !gains) return nullptr;
  if (gains->first == gains->second) return nullptr;
  if (gains->base.matrix() != metric.matrix()) return nullptr;
  if (!spec.feedforward().isZero(0.0)) return nullptr;
  return &*gains;
}

}  // namespace

double alpha_of(double p1, double p2) {
  check_gains(p1, p2);
  return (p1 + p2 + std::max(2.0, 2.0 * p1 * p2)) / std::abs(p1 - p2);
}

ErrorPair closed_form_errors(const LaplacianMatrix& laplacian, double p1,
                             double p2, const Vector& ep0, const Vector& ev0,
                             double t) {
  check_gains(p1, p2);
  const Eigen::Index n = laplacian.size();
  if (ep0.size() != n || ev0.size() != n) {
    throw Error(Errc::structural, "closed_form_errors: vector length mismatch");
  }
  if (t == 0.0) return {ep0, ev0};
  const Matrix& l = laplacian.matrix();
  const Matrix e1 = expm(-p1 * t * l);
  const Matrix e2 = expm(-p2 * t * l);
  const double inv = 1.0 / (p1 - p2);
  const Matrix ep_from_ep = (p1 * e2 - p2 * e1) * inv;
  const Matrix ep_from_ev = (e2 - e1) * inv;
  const Matrix ev_from_ep = (p1 * p2 * inv) * (e1 - e2);
  const Matrix ev_from_ev = (p1 * e1 - p2 * e2) * inv;
  return {apply(ep_from_ep, ep0) + apply(ep_from_ev, ev0),
          apply(ev_from_ep, ep0) + apply(ev_from_ev, ev0)};
}

PerformanceReport evaluate_performance(const Trajectory& traj,
                                       const ControllerSpec& spec,
                                       const LaplacianMatrix& metric_laplacian,
                                       const PerformanceOptions& opts) {
  PerformanceReport report;
  if (traj.empty()) {
    throw Error(Errc::domain, "evaluate_performance: empty trajectory");
  }
  report.overflow = traj.overflow;
  report.horizon = traj.times.back();
  const auto& gains = spec.scalar_gains();
  if (spec.kind() == ControllerKind::serial && gains &&
      gains->first != gains->second) {
    report.alpha_bound = alpha_of(gains->first, gains->second);
  }

  const ErrorMetric metric = ErrorMetric::for_spec(spec, metric_laplacian);
  std::size_t peak = 0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double norm =
        stacked_norm(metric.position_error(traj.states[k].x),
                     metric.velocity_error(traj.states[k].v));
    if (k == 0) report.initial_norm = norm;
    if (norm > report.peak_norm) {
      report.peak_norm = norm;
      peak = k;
    }
  }
  report.time_of_peak = traj.times[peak];

  // Refine around the grid peak: the continuous-time sup can sit between
  // samples.
  if (traj.size() >= 2 && opts.refine_points > 1 && !traj.overflow) {
    const ClosedLoopSystem sys = assemble(spec, Coordinates::physical);
    const ScalarGains* cf = closed_form_gains(spec, metric_laplacian);
    const Vector ep0 = metric.position_error(traj.states[0].x);
    const Vector ev0 = metric.velocity_error(traj.states[0].v);
    auto refine_interval = [&](std::size_t from) {
      if (from + 1 >= traj.size()) return;
      const double t0 = traj.times[from];
      const double h = (traj.times[from + 1] - t0) / opts.refine_points;
      const StepPropagator prop(sys, h);
      Vector z = sys.to_coordinates(traj.states[from]);
      for (int j = 1; j < opts.refine_points; ++j) {
        z = prop.step(z);
        const double t = t0 + j * h;
        const StateVector s = sys.from_coordinates(z);
        double norm = stacked_norm(metric.position_error(s.x),
                                   metric.velocity_error(s.v));
        if (cf != nullptr) {
          const ErrorPair exact = closed_form_errors(
              cf->base, cf->first, cf->second, ep0, ev0, t);
          norm = std::max(norm, stacked_norm(exact.ep, exact.ev));
        }
        if (norm > report.peak_norm) {
          report.peak_norm = norm;
          report.time_of_peak = t;
        }
      }
    };
    if (peak > 0) refine_interval(peak - 1);
    refine_interval(peak);
    report.peak_refined = true;
  }

  if (report.initial_norm > opts.zero_tol) {
    report.observed_ratio = report.peak_norm / report.initial_norm;
  } else if (report.peak_norm <= opts.zero_tol && !traj.overflow) {
    report.observed_ratio = 0.0;
  } else {
    report.indeterminate = true;
    report.observed_ratio = std::numeric_limits<double>::infinity();
  }

  if (report.alpha_bound) {
    report.bound_satisfied =
        !report.overflow && !report.indeterminate &&
        report.observed_ratio <= *report.alpha_bound + kBoundTolerance;
  }
  return report;
}

std::vector<SweepRow> sweep(const std::vector<Eigen::Index>& agent_counts,
                            const std::function<SweepCase(Eigen::Index)>& make,
                            const SweepOptions& opts) {
  if (agent_counts.empty()) {
    throw Error(Errc::domain, "sweep: agent count list is empty");
  }
  auto run_one = [&](Eigen::Index n) {
    SweepRow row;
    row.agents = n;
    try {
      const SweepCase c = make(n);
      const ClosedLoopSystem sys = assemble(c.spec, Coordinates::physical);
      row.stability = classify_stability(sys);
      Trajectory traj = integrate(sys, c.init, opts.integration,
                                  ErrorMetric::for_spec(c.spec, c.metric));
      row.report = evaluate_performance(traj, c.spec, c.metric);
      row.alpha = row.report->alpha_bound;
      if (opts.keep_trajectories) row.trajectory = std::move(traj);
    } catch (const Error& e) {
      row.error = e.what();
    }
    return row;
  };

  std::vector<SweepRow> rows;
  rows.reserve(agent_counts.size());
  if (opts.parallel && agent_counts.size() > 1) {
    std::vector<std::future<SweepRow>> pending;
    for (Eigen::Index n : agent_counts) {
      pending.push_back(std::async(std::launch::async, run_one, n));
    }
    for (auto& f : pending) rows.push_back(f.get());
  } else {
    for (Eigen::Index n : agent_counts) rows.push_back(run_one(n));
  }
  return rows;
}

}  // namespace serialcon
