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

#include "serialcon/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "serialcon/error.hpp"
#include "serialcon/kernels.hpp"

namespace serialcon {

namespace {

kernels::ConstMatView view(const Matrix& m) {
  return {m.data(), static_cast<std::size_t>(m.rows()),
          static_cast<std::size_t>(m.cols())};
}

kernels::MatView view(Matrix& m) {
  return {m.data(), static_cast<std::size_t>(m.rows()),
          static_cast<std::size_t>(m.cols())};
}

bool complex_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Pade numerator/denominator pieces: exp(A) ~ (V - U)^{-1} (V + U).
struct PadeTerms {
  Matrix u;
  Matrix v;
};

constexpr std::array<double, 4> kPade3{120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5{30240.0, 15120.0, 3360.0,
                                       420.0,   30.0,    1.0};
constexpr std::array<double, 8> kPade7{17297280.0, 8648640.0, 1995840.0,
                                       277200.0,   25200.0,   1512.0,
                                       56.0,       1.0};
constexpr std::array<double, 10> kPade9{
    17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
    2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kPade13{64764752532480000.0,
                                         32382376266240000.0,
                                         7771770303897600.0,
                                         1187353796428800.0,
                                         129060195264000.0,
                                         10559470521600.0,
                                         670442572800.0,
                                         33522128640.0,
                                         1323241920.0,
                                         40840800.0,
                                         960960.0,
                                         16380.0,
                                         182.0,
                                         1.0};

// 1-norm limits below which each degree meets unit roundoff in double.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

// Low degrees: U = A * sum_{k odd} b_k A^{k-1}, V = sum_{k even} b_k A^k.
template <std::size_t N>
PadeTerms pade_low(const Matrix& a, const std::array<double, N>& b) {
  const Eigen::Index n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = multiply(a, a);
  Matrix odd = b[1] * ident;
  Matrix even = b[0] * ident;
  Matrix power = ident;
  for (std::size_t k = 2; k < N; k += 2) {
    power = multiply(power, a2);
    even += b[k] * power;
    odd += b[k + 1] * power;
  }
  return {multiply(a, odd), even};
}

PadeTerms pade13(const Matrix& a) {
  const auto& b = kPade13;
  const Eigen::Index n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = multiply(a, a);
  const Matrix a4 = multiply(a2, a2);
  const Matrix a6 = multiply(a4, a2);
  const Matrix inner_u = b[13] * a6 + b[11] * a4 + b[9] * a2;
  const Matrix u_tail =
      multiply(a6, inner_u) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident;
  const Matrix inner_v = b[12] * a6 + b[10] * a4 + b[8] * a2;
  Matrix v =
      multiply(a6, inner_v) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
  return {multiply(a, u_tail), std::move(v)};
}

Matrix pade_solve(const PadeTerms& t) {
  const Matrix p = t.v + t.u;
  const Matrix q = t.v - t.u;
  return q.partialPivLu().solve(p);
}

}  // namespace

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(Errc::structural, "multiply: inner dimensions differ");
  }
  Matrix c(a.rows(), b.cols());
  if (c.size() == 0) return c;
  if (a.cols() == 0) {
    c.setZero();
    return c;
  }
  kernels::active().gemm(view(a), view(b), view(c));
  return c;
}

Vector apply(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size()) {
    throw Error(Errc::structural, "apply: dimension mismatch");
  }
  Vector y(a.rows());
  if (y.size() == 0) return y;
  if (a.cols() == 0) {
    y.setZero();
    return y;
  }
  kernels::active().gemv(view(a), {x.data(), static_cast<std::size_t>(x.size())},
                         {y.data(), static_cast<std::size_t>(y.size())});
  return y;
}

double inf_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  const auto& k = kernels::active();
  std::vector<double> row_sums(static_cast<std::size_t>(a.rows()), 0.0);
  const auto rows = static_cast<std::size_t>(a.rows());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    k.abs_accumulate({a.data() + j * a.rows(), rows}, row_sums);
  }
  return k.max_abs(row_sums);
}

double inf_norm(const Vector& x) {
  return kernels::active().max_abs(
      {x.data(), static_cast<std::size_t>(x.size())});
}

double one_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

Matrix expm(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(Errc::structural, "expm: matrix must be square");
  }
  if (a.size() == 0) return a;
  if (!a.allFinite()) {
    throw Error(Errc::numerical_failure, "expm: non-finite input");
  }
  const double norm = one_norm(a);
  if (norm <= kTheta3) return pade_solve(pade_low(a, kPade3));
  if (norm <= kTheta5) return pade_solve(pade_low(a, kPade5));
  if (norm <= kTheta7) return pade_solve(pade_low(a, kPade7));
  if (norm <= kTheta9) return pade_solve(pade_low(a, kPade9));

  int squarings = 0;
  if (norm > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  }
  const Matrix scaled = a * std::ldexp(1.0, -squarings);
  Matrix result = pade_solve(pade13(scaled));
  for (int s = 0; s < squarings; ++s) result = multiply(result, result);
  return result;
}

std::vector<std::vector<Eigen::Index>> irreducible_blocks(const Matrix& a) {
  const Eigen::Index n = a.rows();
  // Edge j -> i whenever a(i, j) != 0: row i depends on column j. Tarjan's
  // algorithm emits components sinks-first in this orientation, so reversing
  // its output lists each block before the blocks that depend on it.
  std::vector<std::vector<Eigen::Index>> out_edges(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i != j && a(i, j) != 0.0) out_edges[j].push_back(i);
    }
  }

  std::vector<std::vector<Eigen::Index>> blocks;
  std::vector<Eigen::Index> index(n, -1), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  Eigen::Index counter = 0;

  // Iterative Tarjan; frames hold (vertex, next edge position).
  std::vector<std::pair<Eigen::Index, std::size_t>> frames;
  for (Eigen::Index root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    frames.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos < out_edges[v].size()) {
        const Eigen::Index w = out_edges[v][pos++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const Eigen::Index done = v;
      frames.pop_back();
      if (!frames.empty()) {
        const Eigen::Index parent = frames.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        std::vector<Eigen::Index> block;
        Eigen::Index w = -1;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          block.push_back(w);
        } while (w != done);
        std::sort(block.begin(), block.end());
        blocks.push_back(std::move(block));
      }
    }
  }
  std::reverse(blocks.begin(), blocks.end());
  return blocks;
}

ComplexList eigenvalues(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(Errc::structural, "eigenvalues: matrix must be square");
  }
  ComplexList result;
  result.reserve(static_cast<std::size_t>(a.rows()));
  for (const auto& block : irreducible_blocks(a)) {
    const auto m = static_cast<Eigen::Index>(block.size());
    if (m == 1) {
      result.emplace_back(a(block[0], block[0]), 0.0);
      continue;
    }
    // Extended precision: defective eigenvalues (the consensus Jordan pair)
    // split by roughly sqrt(eps), which in double is ~1e-8.
    using WideMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    WideMatrix sub(m, m);
    for (Eigen::Index r = 0; r < m; ++r) {
      for (Eigen::Index c = 0; c < m; ++c) sub(r, c) = a(block[r], block[c]);
    }
    Eigen::EigenSolver<WideMatrix> solver(sub, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
      const double rcond = sub.cast<double>().partialPivLu().rcond();
      std::ostringstream msg;
      msg << "eigensolver did not converge on a " << m
          << "x" << m << " block (condition estimate "
          << (rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity())
          << ")";
      throw Error(Errc::numerical_failure, msg.str());
    }
    const auto& values = solver.eigenvalues();
    for (Eigen::Index k = 0; k < m; ++k) {
      result.emplace_back(static_cast<double>(values[k].real()),
                          static_cast<double>(values[k].imag()));
    }
  }
  std::sort(result.begin(), result.end(), complex_less);
  return result;
}

RankDecision numerical_rank(const Matrix& a, double rel_tol) {
  RankDecision decision;
  if (a.size() == 0) return decision;
  Eigen::BDCSVD<Matrix> svd(a);
  const Vector& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma[0] : 0.0;
  decision.threshold = rel_tol * sigma_max;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma[k] > decision.threshold) ++decision.rank;
    if (sigma[k] > decision.threshold * 1e-2 &&
        sigma[k] < decision.threshold * 1e2) {
      decision.ambiguous = true;
    }
  }
  return decision;
}

double pairing_distance(const ComplexList& a, const ComplexList& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  const std::size_t n = a.size();
  struct Candidate {
    double dist;
    std::size_t i;
    std::size_t j;
  };
  std::vector<Candidate> all;
  all.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) all.push_back({std::abs(a[i] - b[j]), i, j});
  }
  std::sort(all.begin(), all.end(), [](const Candidate& x, const Candidate& y) {
    if (x.dist != y.dist) return x.dist < y.dist;
    if (x.i != y.i) return x.i < y.i;
    return x.j < y.j;
  });
  std::vector<bool> used_a(n, false), used_b(n, false);
  double worst = 0.0;
  std::size_t matched = 0;
  for (const auto& c : all) {
    if (used_a[c.i] || used_b[c.j]) continue;
    used_a[c.i] = used_b[c.j] = true;
    worst = std::max(worst, c.dist);
    if (++matched == n) break;
  }
  return worst;
}

}  // namespace serialcon
