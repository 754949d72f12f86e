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

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace serialcon {

// Column-major dense storage throughout; the SIMD kernels rely on it.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;
using ComplexList = std::vector<Complex>;

inline Vector ones(Eigen::Index n) { return Vector::Ones(n); }

// Positions and velocities of all agents at one instant.
struct StateVector {
  Vector x;
  Vector v;

  Eigen::Index size() const { return x.size(); }
  bool all_finite() const { return x.allFinite() && v.allFinite(); }
};

}  // namespace serialcon
