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

#include "serialcon/closed_loop.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "serialcon/error.hpp"
#include "serialcon/linalg.hpp"

namespace serialcon {

namespace {

void require_serial(const ControllerSpec& spec) {
  if (spec.kind() != ControllerKind::serial) {
    throw Error(Errc::unsupported_coordinates,
                "xi coordinates exist only for serial consensus specs");
  }
}

void write_block(std::ostream& out, const Matrix& m) {
  char buf[40];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j) + 0.0);  // no "-0"
      if (j > 0) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace

std::string_view to_string(Coordinates c) noexcept {
  return c == Coordinates::xi ? "xi" : "physical";
}

ClosedLoopSystem::ClosedLoopSystem(ControllerSpec spec, Coordinates coords,
                                   Matrix a, Matrix b, Vector u_ref)
    : spec_(std::move(spec)),
      coords_(coords),
      a_(std::move(a)),
      b_(std::move(b)),
      u_ref_(std::move(u_ref)) {}

ClosedLoopSystem assemble(const ControllerSpec& spec, Coordinates coords) {
  const Eigen::Index n = spec.size();
  const FeedbackMatrices fb = synthesize(spec);
  Matrix a = Matrix::Zero(2 * n, 2 * n);
  if (coords == Coordinates::physical) {
    a.topRightCorner(n, n).setIdentity();
    a.bottomLeftCorner(n, n) = -fb.position_gain;
    a.bottomRightCorner(n, n) = -fb.velocity_gain;
  } else {
    require_serial(spec);
    a.topLeftCorner(n, n) = -spec.first().matrix();
    a.topRightCorner(n, n).setIdentity();
    a.bottomRightCorner(n, n) = -spec.second().matrix();
  }
  Matrix b = Matrix::Zero(2 * n, n);
  b.bottomRows(n).setIdentity();
  return ClosedLoopSystem(spec, coords, std::move(a), std::move(b), fb.u_ref);
}

Vector ClosedLoopSystem::to_coordinates(const StateVector& s) const {
  if (coords_ == Coordinates::xi) return physical_to_xi(spec_, s);
  const Eigen::Index n = agents();
  if (s.x.size() != n || s.v.size() != n) {
    throw Error(Errc::structural, "state length does not match the system");
  }
  Vector z(2 * n);
  z << s.x, s.v;
  return z;
}

StateVector ClosedLoopSystem::from_coordinates(const Vector& z) const {
  if (coords_ == Coordinates::xi) return xi_to_physical(spec_, z);
  const Eigen::Index n = agents();
  if (z.size() != 2 * n) {
    throw Error(Errc::structural, "state length does not match the system");
  }
  return {z.head(n), z.tail(n)};
}

StateVector xi_to_physical(const ControllerSpec& spec, const Vector& xi) {
  require_serial(spec);
  const Eigen::Index n = spec.size();
  if (xi.size() != 2 * n) {
    throw Error(Errc::structural, "xi vector must have length 2n");
  }
  Vector x = xi.head(n);
  Vector v = xi.tail(n) - apply(spec.first().matrix(), x);
  return {std::move(x), std::move(v)};
}

Vector physical_to_xi(const ControllerSpec& spec, const StateVector& s) {
  require_serial(spec);
  const Eigen::Index n = spec.size();
  if (s.x.size() != n || s.v.size() != n) {
    throw Error(Errc::structural, "state length does not match the spec");
  }
  Vector xi(2 * n);
  xi << s.x, s.v + apply(spec.first().matrix(), s.x);
  return xi;
}

namespace {

// Quotient of M by span{1} in the basis {1, e_j (j != r)}: entries
// M(i, j) - M(r, j) for i, j != r. Exact when M 1 = 0.
Matrix relative_to(const Matrix& m, Eigen::Index r) {
  const Eigen::Index n = m.rows();
  Matrix q(n - 1, n - 1);
  for (Eigen::Index j = 0, qj = 0; j < n; ++j) {
    if (j == r) continue;
    for (Eigen::Index i = 0, qi = 0; i < n; ++i) {
      if (i == r) continue;
      q(qi++, qj) = m(i, j) - m(r, j);
    }
    ++qj;
  }
  return q;
}

}  // namespace

ComplexList spectrum(const ClosedLoopSystem& sys) {
  const Matrix& a = sys.state_matrix();
  const Eigen::Index n = sys.agents();
  if (sys.coordinates() != Coordinates::physical || n < 2) return eigenvalues(a);

  // Relative feedback leaves span{[1;0], [0;1]} invariant and carries the
  // consensus Jordan pair there. Rounding in A0 = L2 L1 leaves A0 1 ~ 1e-16,
  // which would split that defective pair by ~1e-8, so it is deflated
  // explicitly.
  const Matrix a0 = -a.bottomLeftCorner(n, n);
  const Matrix a1 = -a.bottomRightCorner(n, n);
  const double residual =
      std::max(inf_norm(Vector(a0.rowwise().sum())), inf_norm(Vector(a1.rowwise().sum())));
  if (residual > default_rowsum_tol(n) * std::max(inf_norm(a), 1.0)) {
    return eigenvalues(a);
  }
  // Reference row with the fewest couplings keeps the quotient sparse (the
  // leader of a path has none).
  Eigen::Index r = 0;
  Eigen::Index best = std::numeric_limits<Eigen::Index>::max();
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index nnz = 0;
    for (Eigen::Index j = 0; j < n; ++j) nnz += (a0(i, j) != 0.0) + (a1(i, j) != 0.0);
    if (nnz < best) {
      best = nnz;
      r = i;
    }
  }
  const Eigen::Index m = n - 1;
  Matrix reduced = Matrix::Zero(2 * m, 2 * m);
  reduced.topRightCorner(m, m) = Matrix::Identity(m, m);
  reduced.bottomLeftCorner(m, m) = -relative_to(a0, r);
  reduced.bottomRightCorner(m, m) = -relative_to(a1, r);
  ComplexList result = eigenvalues(reduced);
  result.emplace_back(0.0, 0.0);
  result.emplace_back(0.0, 0.0);
  std::sort(result.begin(), result.end(), [](const Complex& x, const Complex& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return result;
}

StabilityReport classify_stability(const ClosedLoopSystem& sys,
                                   const StabilityOptions& opts) {
  StabilityReport report;
  const Matrix& a = sys.state_matrix();
  const Eigen::Index dim = a.rows();
  const double scale = std::max(inf_norm(a), 1.0);
  report.zero_tolerance = opts.zero_rel_tol * scale;

  report.max_nonzero_real_part = -std::numeric_limits<double>::infinity();
  bool rest_stable = true;
  for (const Complex& lambda : spectrum(sys)) {
    if (std::abs(lambda) <= report.zero_tolerance) {
      ++report.zero_eigenvalue_count;
      continue;
    }
    report.max_nonzero_real_part =
        std::max(report.max_nonzero_real_part, lambda.real());
    if (!(lambda.real() < -report.zero_tolerance)) rest_stable = false;
  }

  const RankDecision r1 = numerical_rank(a, opts.rank_rel_tol);
  const RankDecision r2 = numerical_rank(multiply(a, a), opts.rank_rel_tol);
  report.rank_a = r1.rank;
  report.rank_a2 = r2.rank;
  report.rank_ambiguous = r1.ambiguous || r2.ambiguous;
  report.jordan_block_of_two = r1.rank == dim - 1 && r2.rank == dim - 2;

  report.consensus_stable = report.zero_eigenvalue_count == 2 &&
                            report.jordan_block_of_two && rest_stable;
  return report;
}

void write_matrix_dump(std::ostream& out, const ClosedLoopSystem& sys) {
  const Matrix& a = sys.state_matrix();
  const Matrix& b = sys.input_matrix();
  out << "# coords " << to_string(sys.coordinates()) << " agents "
      << sys.agents() << "\n";
  out << "A " << a.rows() << ' ' << a.cols() << '\n';
  write_block(out, a);
  out << "B " << b.rows() << ' ' << b.cols() << '\n';
  write_block(out, b);
}

}  // namespace serialcon
