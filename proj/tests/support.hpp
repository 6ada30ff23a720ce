// Copyright 2026 The faulty-grover Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Test-only generators and independent oracles. Nothing here calls the
// library routine it is used to check.

#include <cmath>
#include <cstddef>
#include <map>
#include <vector>

#include "fgrover/algorithms.hpp"
#include "fgrover/core.hpp"
#include "fgrover/random.hpp"

namespace fgrover::testing {

inline Vector random_vector(std::size_t d, RandomStream& rng) {
  Vector v(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.complex_normal();
  return v;
}

inline StateVector random_unit_state(const RegisterDims& dims, RandomStream& rng) {
  Vector v = random_vector(dims.d(), rng);
  return {dims, v / v.norm()};
}

/// Sub-normalized state with squared norm uniform in [0, 1].
inline StateVector random_subnormal_state(const RegisterDims& dims, RandomStream& rng) {
  Vector v = random_vector(dims.d(), rng);
  return {dims, v * (std::sqrt(rng.uniform()) / v.norm())};
}

/// Random mixed state A A^dag / tr(A A^dag), A complex Ginibre of given rank.
inline DensityMatrix random_density(const RegisterDims& dims, RandomStream& rng, std::size_t rank = 0) {
  const auto d = static_cast<Eigen::Index>(dims.d());
  const auto r = static_cast<Eigen::Index>(rank == 0 ? dims.d() : rank);
  Matrix a(d, r);
  for (Eigen::Index c = 0; c < r; ++c) a.col(c) = random_vector(dims.d(), rng);
  Matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return {dims, 0.5 * (rho + rho.adjoint())};
}

/// Dense perfect oracle built from the definition, entry by entry.
inline Matrix dense_oracle(const RegisterDims& dims, std::size_t k) {
  const auto d = static_cast<Eigen::Index>(dims.d());
  Matrix o = Matrix::Identity(d, d);
  if (k == 0) return o;
  for (std::size_t j = 0; j < dims.m(); ++j) {
    const auto idx = static_cast<Eigen::Index>((k - 1) * dims.m() + j);
    o(idx, idx) = -1.0;
  }
  return o;
}

/// Channel through its Kraus pair {sqrt(1-p) O, sqrt(p) I}.
inline Matrix kraus_channel(const Matrix& rho, const RegisterDims& dims, std::size_t k, double p) {
  const Matrix o = dense_oracle(dims, k);
  return (1.0 - p) * o * rho * o.adjoint() + p * rho;
}

/// Query-register operator tensored with I_m, index convention (i-1)m+(j-1).
inline Matrix kron_identity(const Matrix& query_op, std::size_t m) {
  const auto n = query_op.rows();
  const auto mm = static_cast<Eigen::Index>(m);
  Matrix out = Matrix::Zero(n * mm, n * mm);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index j = 0; j < mm; ++j) out(r * mm + j, c * mm + j) = query_op(r, c);
  return out;
}

inline Vector uniform_vector(std::size_t n) {
  Vector s(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = 1.0 / std::sqrt(static_cast<double>(n));
  return s;
}

/// 2|s><s| - I on the query register.
inline Matrix dense_diffusion(std::size_t n) {
  const Vector s = uniform_vector(n);
  const auto nn = static_cast<Eigen::Index>(n);
  return 2.0 * s * s.adjoint() - Matrix::Identity(nn, nn);
}

/// sin^2((2T+1) theta), sin theta = 1/sqrt(n).
inline double grover_closed_form(std::size_t n, std::size_t t) {
  const double theta = std::asin(1.0 / std::sqrt(static_cast<double>(n)));
  const double s = std::sin((2.0 * static_cast<double>(t) + 1.0) * theta);
  return s * s;
}

/// Smaller eigenvalue of [[a, b], [conj b, c]] from the characteristic polynomial.
inline double min_eig_2x2(double a, Complex b, double c) {
  return 0.5 * (a + c) - std::sqrt(0.25 * (a - c) * (a - c) + std::norm(b));
}

/// Exact final state by enumerating all 2^T fault patterns with their weights.
inline Matrix enumerate_fault_patterns(const QueryAlgorithm& alg, std::size_t k, double p) {
  const std::size_t big_t = alg.query_count();
  const auto d = static_cast<Eigen::Index>(alg.dims().d());
  const Matrix o = dense_oracle(alg.dims(), k);
  std::vector<Matrix> u;
  for (std::size_t t = 0; t <= big_t; ++t) u.push_back(alg.unitary(t).entries());
  Matrix rho = Matrix::Zero(d, d);
  for (std::size_t mask = 0; mask < (std::size_t{1} << big_t); ++mask) {
    Vector psi = u[0] * Vector::Unit(d, 0);
    double weight = 1.0;
    for (std::size_t t = 1; t <= big_t; ++t) {
      const bool fault = (mask >> (t - 1)) & 1U;
      weight *= fault ? p : 1.0 - p;
      if (!fault) psi = o * psi;
      psi = u[t] * psi;
    }
    rho += weight * psi * psi.adjoint();
  }
  return rho;
}

/// Exact hitting-time CDF of the faulty Grover walk with k = 1.
///
/// In the plane of |k> and |s> the state after U_t sits at angle
/// theta (1 + 2x) from |k-perp>: a successful query sends x -> x + 1, a fault
/// (U alone, a reflection about |s>) sends x -> -x. cdf[t] = P(hit by t).
inline std::vector<double> walk_hitting_cdf(std::size_t n, double p, double threshold, std::size_t max_t) {
  const double theta = std::asin(1.0 / std::sqrt(static_cast<double>(n)));
  auto hit = [&](long x) {
    const double s = std::sin(theta * (1.0 + 2.0 * static_cast<double>(x)));
    return s * s >= threshold;
  };
  std::vector<double> cdf(max_t + 1, 0.0);
  std::map<long, double> alive{{0, 1.0}};
  double absorbed = hit(0) ? 1.0 : 0.0;
  if (absorbed > 0.0) alive.clear();
  cdf[0] = absorbed;
  for (std::size_t t = 1; t <= max_t; ++t) {
    std::map<long, double> next;
    for (const auto& [x, w] : alive) {
      for (const auto& [y, q] : {std::pair{x + 1, 1.0 - p}, std::pair{-x, p}}) {
        if (q == 0.0) continue;
        if (hit(y)) absorbed += w * q;
        else next[y] += w * q;
      }
    }
    alive = std::move(next);
    cdf[t] = absorbed;
  }
  return cdf;
}

}  // namespace fgrover::testing
