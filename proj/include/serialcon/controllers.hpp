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

#include <optional>
#include <string_view>

#include "serialcon/graphs.hpp"
#include "serialcon/types.hpp"

namespace serialcon {

enum class ControllerKind { conventional, serial };

std::string_view to_string(ControllerKind k) noexcept;

// Present when a spec was built as two scalar gains times one Laplacian:
// (r1, r0) for conventional, (p1, p2) for serial.
struct ScalarGains {
  double first = 0.0;
  double second = 0.0;
  LaplacianMatrix base;
};

// A formation control law over n agents.
//
// conventional: u = u_ref - L1 v - L0 x           (first = L1, second = L0)
// serial:       u = u_ref - (L2 + L1) v - L2 L1 x (first = L1, second = L2)
//
// Offsets and the reference velocity are folded into u_ref at synthesis so
// that the translated state x - p - t v_ref 1 obeys the offset-free law.
class ControllerSpec {
 public:
  static ControllerSpec conventional(LaplacianMatrix velocity,
                                     LaplacianMatrix position);
  static ControllerSpec conventional(const LaplacianMatrix& base, double r1,
                                     double r0);
  static ControllerSpec serial(LaplacianMatrix first, LaplacianMatrix second);
  static ControllerSpec serial(const LaplacianMatrix& base, double p1,
                               double p2);

  // Throws Error(structural) if a vector length differs from size().
  ControllerSpec with_offsets(Vector offsets, double v_ref) const;
  ControllerSpec with_feedforward(Vector u_ref) const;

  ControllerKind kind() const { return kind_; }
  Eigen::Index size() const { return first_.size(); }
  const LaplacianMatrix& first() const { return first_; }
  const LaplacianMatrix& second() const { return second_; }
  const Vector& offsets() const { return offsets_; }
  double v_ref() const { return v_ref_; }
  // Constant reference input on top of the offset compensation.
  const Vector& feedforward() const { return u_ref_; }
  const std::optional<ScalarGains>& scalar_gains() const { return gains_; }

 private:
  ControllerSpec(ControllerKind kind, LaplacianMatrix first,
                 LaplacianMatrix second, std::optional<ScalarGains> gains);

  ControllerKind kind_;
  LaplacianMatrix first_;
  LaplacianMatrix second_;
  std::optional<ScalarGains> gains_;
  Vector offsets_;
  double v_ref_ = 0.0;
  Vector u_ref_;
};

struct FeedbackMatrices {
  Matrix velocity_gain;  // A1
  Matrix position_gain;  // A0
  Vector u_ref;          // constant feedforward, A0 p + extra u_ref
};

FeedbackMatrices synthesize(const ControllerSpec& spec);

// x - p - t v_ref 1, and its inverse.
Vector translate_offsets(const ControllerSpec& spec, const Vector& x, double t);
Vector untranslate_offsets(const ControllerSpec& spec, const Vector& x_tilde,
                           double t);

// Whole-state variants; the velocity shifts by v_ref 1.
StateVector translate_offsets(const ControllerSpec& spec,
                              const StateVector& state, double t);
StateVector untranslate_offsets(const ControllerSpec& spec,
                                const StateVector& state, double t);

}  // namespace serialcon
