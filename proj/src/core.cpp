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

#include "fgrover/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fgrover {

namespace {

constexpr double kNormSlack = 1e-9;
constexpr double kUnitarityTol = 1e-10;
constexpr double kHermitianInputTol = 1e-8;

Eigen::VectorXd hermitian_eigenvalues(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Hermitian eigensolver did not converge");
  }
  return solver.eigenvalues();
}

}  // namespace

RegisterDims::RegisterDims(std::size_t n, std::size_t m) : n_(n), m_(m) {
  if (n < 2) throw std::invalid_argument("query dimension n must be >= 2, got " + std::to_string(n));
  if (m < 1) throw std::invalid_argument("ancilla dimension m must be >= 1, got " + std::to_string(m));
}

std::size_t RegisterDims::flat_index(std::size_t i, std::size_t j) const {
  if (i < 1 || i > n_ || j < 1 || j > m_) {
    throw std::out_of_range("basis label |" + std::to_string(i) + "," + std::to_string(j) +
                            "> outside " + to_string(*this));
  }
  return (i - 1) * m_ + (j - 1);
}

void RegisterDims::require_within(std::size_t max_dim) const {
  if (d() > max_dim) {
    throw SizeCapExceeded("dimension " + std::to_string(d()) + " exceeds cap " +
                          std::to_string(max_dim));
  }
}

std::string to_string(const RegisterDims& dims) {
  std::ostringstream os;
  os << "(n=" << dims.n() << ", m=" << dims.m() << ")";
  return os.str();
}

StateVector::StateVector(RegisterDims dims, Vector amplitudes)
    : dims_(dims), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != dims_.d()) {
    throw DimensionMismatch("state of length " + std::to_string(amplitudes_.size()) +
                            " does not match " + to_string(dims_));
  }
  if (!(amplitudes_.squaredNorm() <= 1.0 + kNormSlack)) {
    throw std::invalid_argument("state squared norm exceeds 1");
  }
}

StateVector StateVector::basis(RegisterDims dims, std::size_t i, std::size_t j) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dims.d()));
  v(static_cast<Eigen::Index>(dims.flat_index(i, j))) = 1.0;
  return {dims, std::move(v)};
}

std::vector<AmplitudeBlock> block_decompose(const StateVector& state) {
  const auto& dims = state.dims();
  const auto m = static_cast<Eigen::Index>(dims.m());
  std::vector<AmplitudeBlock> blocks;
  blocks.reserve(dims.n());
  for (std::size_t i = 1; i <= dims.n(); ++i) {
    blocks.push_back({i, state.amplitudes().segment(static_cast<Eigen::Index>(i - 1) * m, m)});
  }
  return blocks;
}

StateVector concatenate_blocks(const RegisterDims& dims, std::span<const AmplitudeBlock> blocks) {
  if (blocks.size() != dims.n()) {
    throw DimensionMismatch("expected " + std::to_string(dims.n()) + " blocks, got " +
                            std::to_string(blocks.size()));
  }
  const auto m = static_cast<Eigen::Index>(dims.m());
  Vector v(static_cast<Eigen::Index>(dims.d()));
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].index != i + 1 || blocks[i].block.size() != m) {
      throw DimensionMismatch("block " + std::to_string(i + 1) + " is malformed");
    }
    v.segment(static_cast<Eigen::Index>(i) * m, m) = blocks[i].block;
  }
  return {dims, std::move(v)};
}

Vector embed_block(const RegisterDims& dims, const AmplitudeBlock& block) {
  const auto m = static_cast<Eigen::Index>(dims.m());
  if (block.block.size() != m) throw DimensionMismatch("block length differs from m");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dims.d()));
  v.segment(static_cast<Eigen::Index>(dims.flat_index(block.index, 1)), m) = block.block;
  return v;
}

DensityMatrix::DensityMatrix(RegisterDims dims, Matrix entries)
    : dims_(dims), entries_(std::move(entries)) {
  const auto d = static_cast<Eigen::Index>(dims_.d());
  if (entries_.rows() != d || entries_.cols() != d) {
    throw DimensionMismatch("density matrix shape does not match " + to_string(dims_));
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& state) {
  const Vector& v = state.amplitudes();
  return {state.dims(), v * v.adjoint()};
}

std::string density_violation(const DensityMatrix& rho) {
  std::ostringstream os;
  const double herm = hermiticity_defect(rho.entries());
  if (herm > 1e-10) {
    os << "not Hermitian (defect " << herm << ")";
    return os.str();
  }
  const double tr = rho.trace();
  if (std::abs(tr - 1.0) > 1e-9) {
    os << "trace " << tr << " != 1";
    return os.str();
  }
  const double lo = min_eigenvalue(rho.entries());
  if (lo < -1e-9) {
    os << "negative eigenvalue " << lo;
    return os.str();
  }
  return {};
}

UnitaryOp::UnitaryOp(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw std::invalid_argument("unitary must be a non-empty square matrix");
  }
  const double defect = unitarity_defect(entries_);
  if (!(defect <= kUnitarityTol)) {
    throw std::invalid_argument("matrix is not unitary (defect " + std::to_string(defect) + ")");
  }
}

double unitarity_defect(const Matrix& u) {
  const Matrix g = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  return g.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const Matrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (!(a.dims() == b.dims())) {
    throw DimensionMismatch("trace_distance: " + to_string(a.dims()) + " vs " + to_string(b.dims()));
  }
  const Matrix diff = a.entries() - b.entries();
  const Matrix herm = 0.5 * (diff + diff.adjoint());
  const double sum = hermitian_eigenvalues(herm).cwiseAbs().sum();
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

double pure_mixed_distance_bound(const DensityMatrix& rho, const StateVector& phi) {
  if (!(rho.dims() == phi.dims())) throw DimensionMismatch("pure_mixed_distance_bound: dims differ");
  if (std::abs(phi.squared_norm() - 1.0) > kNormSlack) {
    throw std::invalid_argument("pure_mixed_distance_bound needs a unit vector");
  }
  const Vector& v = phi.amplitudes();
  const double overlap = v.dot(rho.entries() * v).real();
  return std::sqrt(std::clamp(1.0 - overlap, 0.0, 1.0));
}

double min_eigenvalue(const Matrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) throw std::invalid_argument("min_eigenvalue: not square");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (hermiticity_defect(h) > kHermitianInputTol * scale) {
    throw std::invalid_argument("min_eigenvalue: matrix is not Hermitian");
  }
  const Matrix herm = 0.5 * (h + h.adjoint());
  return hermitian_eigenvalues(herm).minCoeff();
}

UnitaryOp haar_random_unitary(std::size_t d, RandomStream& stream) {
  if (d == 0) throw std::invalid_argument("haar_random_unitary: d must be >= 1");
  const auto n = static_cast<Eigen::Index>(d);
  Matrix z(n, n);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) z(r, c) = stream.complex_normal();
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index c = 0; c < n; ++c) {
    const Complex diag = r(c, c);
    const double mag = std::abs(diag);
    q.col(c) *= mag > 0.0 ? diag / mag : Complex(1.0);
  }
  return UnitaryOp(std::move(q));
}

}  // namespace fgrover
