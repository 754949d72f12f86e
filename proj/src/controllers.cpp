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

#include "serialcon/controllers.hpp"

#include <cmath>

#include "serialcon/error.hpp"
#include "serialcon/linalg.hpp"

namespace serialcon {

namespace {

void require_positive_gain(double g, const char* name) {
  if (!(g > 0.0) || !std::isfinite(g)) {
    throw Error(Errc::domain, std::string(name) + " must be positive and finite");
  }
}

void require_length(const Vector& v, Eigen::Index n, const char* what) {
  if (v.size() != n) {
    throw Error(Errc::structural,
                std::string(what) + " length does not match the agent count");
  }
}

}  // namespace

std::string_view to_string(ControllerKind k) noexcept {
  return k == ControllerKind::serial ? "serial" : "conventional";
}

ControllerSpec::ControllerSpec(ControllerKind kind, LaplacianMatrix first,
                               LaplacianMatrix second,
                               std::optional<ScalarGains> gains)
    : kind_(kind),
      first_(std::move(first)),
      second_(std::move(second)),
      gains_(std::move(gains)),
      offsets_(Vector::Zero(first_.size())),
      u_ref_(Vector::Zero(first_.size())) {
  if (first_.size() != second_.size()) {
    throw Error(Errc::structural, "controller Laplacians differ in dimension");
  }
}

ControllerSpec ControllerSpec::conventional(LaplacianMatrix velocity,
                                            LaplacianMatrix position) {
  return ControllerSpec(ControllerKind::conventional, std::move(velocity),
                        std::move(position), std::nullopt);
}

ControllerSpec ControllerSpec::conventional(const LaplacianMatrix& base,
                                            double r1, double r0) {
  require_positive_gain(r1, "r1");
  require_positive_gain(r0, "r0");
  return ControllerSpec(ControllerKind::conventional, base.scaled(r1),
                        base.scaled(r0), ScalarGains{r1, r0, base});
}

ControllerSpec ControllerSpec::serial(LaplacianMatrix first,
                                      LaplacianMatrix second) {
  return ControllerSpec(ControllerKind::serial, std::move(first),
                        std::move(second), std::nullopt);
}

ControllerSpec ControllerSpec::serial(const LaplacianMatrix& base, double p1,
                                      double p2) {
  require_positive_gain(p1, "p1");
  require_positive_gain(p2, "p2");
  return ControllerSpec(ControllerKind::serial, base.scaled(p1),
                        base.scaled(p2), ScalarGains{p1, p2, base});
}

ControllerSpec ControllerSpec::with_offsets(Vector offsets, double v_ref) const {
  require_length(offsets, size(), "offset vector");
  if (!offsets.allFinite() || !std::isfinite(v_ref)) {
    throw Error(Errc::domain, "offsets and v_ref must be finite");
  }
  ControllerSpec copy = *this;
  copy.offsets_ = std::move(offsets);
  copy.v_ref_ = v_ref;
  return copy;
}

ControllerSpec ControllerSpec::with_feedforward(Vector u_ref) const {
  require_length(u_ref, size(), "feedforward vector");
  ControllerSpec copy = *this;
  copy.u_ref_ = std::move(u_ref);
  return copy;
}

FeedbackMatrices synthesize(const ControllerSpec& spec) {
  FeedbackMatrices out;
  if (spec.kind() == ControllerKind::conventional) {
    out.velocity_gain = spec.first().matrix();
    out.position_gain = spec.second().matrix();
  } else {
    out.velocity_gain = spec.second().matrix() + spec.first().matrix();
    out.position_gain = multiply(spec.second().matrix(), spec.first().matrix());
  }
  out.u_ref = apply(out.position_gain, spec.offsets()) + spec.feedforward();
  return out;
}

Vector translate_offsets(const ControllerSpec& spec, const Vector& x,
                         double t) {
  require_length(x, spec.size(), "position vector");
  return (x - spec.offsets()).array() - t * spec.v_ref();
}

Vector untranslate_offsets(const ControllerSpec& spec, const Vector& x_tilde,
                           double t) {
  require_length(x_tilde, spec.size(), "position vector");
  return (x_tilde + spec.offsets()).array() + t * spec.v_ref();
}

StateVector translate_offsets(const ControllerSpec& spec,
                              const StateVector& state, double t) {
  require_length(state.v, spec.size(), "velocity vector");
  return {translate_offsets(spec, state.x, t),
          state.v.array() - spec.v_ref()};
}

StateVector untranslate_offsets(const ControllerSpec& spec,
                                const StateVector& state, double t) {
  require_length(state.v, spec.size(), "velocity vector");
  return {untranslate_offsets(spec, state.x, t),
          state.v.array() + spec.v_ref()};
}

}  // namespace serialcon
