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

// Dense complex linear algebra and state-space primitives.
//
// Basis state |i, j> (query index i in 1..n, ancilla index j in 1..m) lives at
// flat index (i - 1) * m + (j - 1): query-major, ancilla-minor. The m
// amplitudes belonging to one query index are therefore a contiguous slice.

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fgrover/random.hpp"

namespace fgrover {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Largest total dimension evolved as a dense density matrix by default.
inline constexpr std::size_t kDefaultMaxDim = 256;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SizeCapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

class RegisterDims {
 public:
  /// Throws std::invalid_argument unless n >= 2 and m >= 1.
  RegisterDims(std::size_t n, std::size_t m);

  [[nodiscard]] std::size_t n() const { return n_; }
  [[nodiscard]] std::size_t m() const { return m_; }
  [[nodiscard]] std::size_t d() const { return n_ * m_; }

  /// Flat offset of |i, j>, both 1-based.
  [[nodiscard]] std::size_t flat_index(std::size_t i, std::size_t j) const;

  /// Throws SizeCapExceeded when d() > max_dim.
  void require_within(std::size_t max_dim) const;

  friend bool operator==(const RegisterDims&, const RegisterDims&) = default;

 private:
  std::size_t n_;
  std::size_t m_;
};

std::string to_string(const RegisterDims& dims);

/// Pure, possibly sub-normalized state. Squared norm is kept in [0, 1 + 1e-9].
class StateVector {
 public:
  StateVector(RegisterDims dims, Vector amplitudes);

  /// Basis state |i, j>, both 1-based.
  static StateVector basis(RegisterDims dims, std::size_t i, std::size_t j = 1);

  [[nodiscard]] const RegisterDims& dims() const { return dims_; }
  [[nodiscard]] const Vector& amplitudes() const { return amplitudes_; }
  [[nodiscard]] double squared_norm() const { return amplitudes_.squaredNorm(); }

 private:
  RegisterDims dims_;
  Vector amplitudes_;
};

/// The m amplitudes of a state on query index `index` (1-based).
struct AmplitudeBlock {
  std::size_t index;
  Vector block;
};

/// Splits a state into its n query blocks, in order.
std::vector<AmplitudeBlock> block_decompose(const StateVector& state);

/// Inverse of block_decompose. Blocks must be complete and ordered 1..n.
StateVector concatenate_blocks(const RegisterDims& dims, std::span<const AmplitudeBlock> blocks);

/// Embeds block beta at query index i: the vector |i, beta>.
Vector embed_block(const RegisterDims& dims, const AmplitudeBlock& block);

class DensityMatrix {
 public:
  /// Checks shape only; see density_violation() for the physical invariants.
  DensityMatrix(RegisterDims dims, Matrix entries);

  static DensityMatrix pure(const StateVector& state);

  [[nodiscard]] const RegisterDims& dims() const { return dims_; }
  [[nodiscard]] const Matrix& entries() const { return entries_; }
  [[nodiscard]] double trace() const { return entries_.trace().real(); }

 private:
  RegisterDims dims_;
  Matrix entries_;
};

/// Returns an empty string when rho is Hermitian (1e-10), unit trace (1e-9)
/// and has no eigenvalue below -1e-9; otherwise a description of the failure.
std::string density_violation(const DensityMatrix& rho);

class UnitaryOp {
 public:
  /// Throws std::invalid_argument if the matrix is not square or U^dag U
  /// deviates from identity by more than 1e-10 in any entry.
  explicit UnitaryOp(Matrix entries);

  [[nodiscard]] const Matrix& entries() const { return entries_; }
  [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }

 private:
  Matrix entries_;
};

/// max |U^dag U - I| entrywise.
double unitarity_defect(const Matrix& u);
/// max |A - A^dag| entrywise.
double hermiticity_defect(const Matrix& a);

/// Normalized trace distance (1/2) sum |eig(a - b)|.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// sqrt(1 - <phi|rho|phi>) clamped to [0, 1]; upper-bounds
/// trace_distance(rho, |phi><phi|). Requires a unit phi (1e-9).
double pure_mixed_distance_bound(const DensityMatrix& rho, const StateVector& phi);

/// Smallest eigenvalue of a Hermitian matrix (Hermitian within 1e-8).
double min_eigenvalue(const Matrix& h);

/// Haar-distributed d x d unitary: QR of a complex Ginibre matrix with the
/// phases of diag(R) divided out.
UnitaryOp haar_random_unitary(std::size_t d, RandomStream& stream);

}  // namespace fgrover
