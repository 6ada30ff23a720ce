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

#include "fgrover/oracle.hpp"

#include <cmath>
#include <string>

namespace fgrover {

namespace {

void check_marked(const RegisterDims& dims, std::size_t k) {
  if (k > dims.n()) {
    throw std::out_of_range("marked index " + std::to_string(k) + " outside 0.." +
                            std::to_string(dims.n()));
  }
}

void check_dims(const RegisterDims& a, const RegisterDims& b, const char* where) {
  if (!(a == b)) {
    throw DimensionMismatch(std::string(where) + ": " + to_string(a) + " vs " + to_string(b));
  }
}

}  // namespace

FaultyOracleSpec::FaultyOracleSpec(RegisterDims dims, std::size_t k, double p)
    : dims_(dims), k_(k), p_(p) {
  check_marked(dims, k);
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("fault probability must lie in (0, 1), got " + std::to_string(p));
  }
}

FaultyOracleSpec::FaultyOracleSpec(RegisterDims dims, std::size_t k, double p, Unchecked)
    : dims_(dims), k_(k), p_(p) {}

FaultyOracleSpec FaultyOracleSpec::with_limits(RegisterDims dims, std::size_t k, double p) {
  check_marked(dims, k);
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("fault probability must lie in [0, 1], got " + std::to_string(p));
  }
  return {dims, k, p, Unchecked{}};
}

FaultyOracleSpec FaultyOracleSpec::with_marked(std::size_t k) const {
  check_marked(dims_, k);
  return {dims_, k, p_, Unchecked{}};
}

UnitaryOp perfect_oracle(const FaultyOracleSpec& spec) {
  const auto d = static_cast<Eigen::Index>(spec.dims().d());
  Vector diag = Vector::Ones(d);
  apply_perfect_oracle(diag, spec);
  return UnitaryOp(diag.asDiagonal().toDenseMatrix());
}

void apply_perfect_oracle(Vector& amplitudes, const FaultyOracleSpec& spec) {
  if (static_cast<std::size_t>(amplitudes.size()) != spec.dims().d()) {
    throw DimensionMismatch("apply_perfect_oracle: length mismatch");
  }
  if (spec.is_null()) return;
  const auto m = static_cast<Eigen::Index>(spec.dims().m());
  const auto offset = static_cast<Eigen::Index>(spec.dims().flat_index(spec.k(), 1));
  amplitudes.segment(offset, m) *= -1.0;
}

DensityMatrix apply_faulty_channel(const DensityMatrix& rho, const FaultyOracleSpec& spec) {
  check_dims(rho.dims(), spec.dims(), "apply_faulty_channel");
  if (spec.is_null()) return rho;
  // O rho O^dag flips the sign of entries with exactly one index in block k;
  // the mixture scales those entries by p - (1 - p) = 2p - 1.
  const double cross = 2.0 * spec.p() - 1.0;
  const auto d = static_cast<Eigen::Index>(spec.dims().d());
  const auto m = static_cast<Eigen::Index>(spec.dims().m());
  const auto lo = static_cast<Eigen::Index>(spec.dims().flat_index(spec.k(), 1));
  Matrix out = rho.entries();
  if (lo > 0) {
    out.block(lo, 0, m, lo) *= cross;
    out.block(0, lo, lo, m) *= cross;
  }
  const Eigen::Index tail = d - (lo + m);
  if (tail > 0) {
    out.block(lo, lo + m, m, tail) *= cross;
    out.block(lo + m, lo, tail, m) *= cross;
  }
  return {rho.dims(), std::move(out)};
}

OracleSample apply_oracle_branch(const StateVector& state, const FaultyOracleSpec& spec, bool fault) {
  check_dims(state.dims(), spec.dims(), "apply_oracle_branch");
  if (fault) return {state, true};
  Vector v = state.amplitudes();
  apply_perfect_oracle(v, spec);
  return {StateVector(state.dims(), std::move(v)), false};
}

OracleSample sample_faulty_application(const StateVector& state, const FaultyOracleSpec& spec,
                                       RandomStream& stream) {
  const bool fault = stream.uniform() < spec.p();
  return apply_oracle_branch(state, spec, fault);
}

Matrix DecomposeResult::reconstruct() const {
  const Vector& t = phi_tilde.amplitudes();
  const Vector leak_vec = embed_block(phi_tilde.dims(), leak);
  return t * t.adjoint() + leak_weight * (leak_vec * leak_vec.adjoint());
}

DecomposeResult lemma_decompose(const StateVector& phi, const FaultyOracleSpec& spec) {
  check_dims(phi.dims(), spec.dims(), "lemma_decompose");
  if (spec.is_null()) {
    throw std::invalid_argument("lemma_decompose is undefined for the null oracle (k = 0)");
  }
  const double p = spec.p();
  const auto m = static_cast<Eigen::Index>(spec.dims().m());
  const auto offset = static_cast<Eigen::Index>(spec.dims().flat_index(spec.k(), 1));
  AmplitudeBlock leak{spec.k(), phi.amplitudes().segment(offset, m)};
  Vector tilde = phi.amplitudes();
  tilde.segment(offset, m) -= 2.0 * (1.0 - p) * leak.block;
  return {StateVector(phi.dims(), std::move(tilde)), std::move(leak), 4.0 * p * (1.0 - p)};
}

}  // namespace fgrover
