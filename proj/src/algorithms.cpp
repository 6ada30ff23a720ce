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

#include "fgrover/algorithms.hpp"

#include <cmath>
#include <stdexcept>

namespace fgrover {

namespace {

using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Views a flat state as an n x m array whose column j holds the query
// amplitudes for ancilla j.
Eigen::Map<const RowMajorMatrix> as_blocks(const Vector& x, const RegisterDims& dims) {
  return {x.data(), static_cast<Eigen::Index>(dims.n()), static_cast<Eigen::Index>(dims.m())};
}

Eigen::Map<RowMajorMatrix> as_blocks(Vector& x, const RegisterDims& dims) {
  return {x.data(), static_cast<Eigen::Index>(dims.n()), static_cast<Eigen::Index>(dims.m())};
}

}  // namespace

Vector uniform_superposition(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_superposition: n must be positive");
  return Vector::Constant(static_cast<Eigen::Index>(n), 1.0 / std::sqrt(static_cast<double>(n)));
}

QueryOperator::QueryOperator(Kind kind, RegisterDims dims, std::shared_ptr<const Matrix> dense)
    : kind_(kind), dims_(dims), dense_(std::move(dense)) {}

QueryOperator QueryOperator::dense(RegisterDims dims, UnitaryOp op) {
  if (op.dim() != dims.d()) {
    throw DimensionMismatch("unitary of dimension " + std::to_string(op.dim()) +
                            " does not act on " + to_string(dims));
  }
  return {Kind::kDense, dims, std::make_shared<const Matrix>(op.entries())};
}

QueryOperator QueryOperator::uniform_preparation(RegisterDims dims) {
  return {Kind::kUniformPreparation, dims, nullptr};
}

QueryOperator QueryOperator::diffusion(RegisterDims dims) {
  return {Kind::kDiffusion, dims, nullptr};
}

Vector QueryOperator::apply(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dims_.d()) {
    throw DimensionMismatch("QueryOperator::apply: length mismatch");
  }
  if (kind_ == Kind::kDense) return (*dense_) * x;

  const auto n = static_cast<Eigen::Index>(dims_.n());
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  Vector y = x;
  auto in = as_blocks(x, dims_);
  auto out = as_blocks(y, dims_);
  // <s| applied to each ancilla column.
  const Eigen::RowVectorXcd overlap = in.colwise().sum() * amp;
  if (kind_ == Kind::kDiffusion) {
    out = -in;
    out.rowwise() += 2.0 * amp * overlap;
    return y;
  }
  // Householder with w = |1> - |s>: x - 2 w (w^dag x) / (w^dag w).
  const double wnorm2 = 2.0 - 2.0 * amp;
  const Eigen::RowVectorXcd wdx = in.row(0) - overlap;
  const Eigen::RowVectorXcd scaled = (2.0 / wnorm2) * wdx;
  out.rowwise() += amp * scaled;
  out.row(0) -= scaled;
  return y;
}

Matrix QueryOperator::conjugate(const Matrix& rho) const {
  if (kind_ == Kind::kDense) return (*dense_) * rho * dense_->adjoint();
  Matrix left(rho.rows(), rho.cols());
  for (Eigen::Index c = 0; c < rho.cols(); ++c) left.col(c) = apply(rho.col(c));
  // U (U rho)^dag = U rho^dag U^dag; take the adjoint to get U rho U^dag.
  const Matrix left_adj = left.adjoint();
  Matrix right(rho.rows(), rho.cols());
  for (Eigen::Index c = 0; c < rho.cols(); ++c) right.col(c) = apply(left_adj.col(c));
  return right.adjoint();
}

Matrix QueryOperator::matrix() const {
  if (kind_ == Kind::kDense) return *dense_;
  const auto d = static_cast<Eigen::Index>(dims_.d());
  Matrix out(d, d);
  for (Eigen::Index c = 0; c < d; ++c) out.col(c) = apply(Vector::Unit(d, c));
  return out;
}

QueryAlgorithm::QueryAlgorithm(RegisterDims dims, std::size_t query_count,
                               std::vector<QueryOperator> operators, std::string name)
    : dims_(dims),
      query_count_(query_count),
      operators_(std::make_shared<const std::vector<QueryOperator>>(std::move(operators))),
      name_(std::move(name)) {
  if (operators_->empty()) throw std::invalid_argument("QueryAlgorithm needs at least U_0");
  if (operators_->size() > query_count_ + 1) {
    throw std::invalid_argument("QueryAlgorithm: more operators than T + 1");
  }
  for (const auto& op : *operators_) {
    if (!(op.dims() == dims_)) throw DimensionMismatch("QueryAlgorithm: operator dims differ");
  }
}

const QueryOperator& QueryAlgorithm::op(std::size_t t) const {
  if (t > query_count_) {
    throw std::out_of_range("U_" + std::to_string(t) + " requested from a " +
                            std::to_string(query_count_) + "-query algorithm");
  }
  return (*operators_)[std::min(t, operators_->size() - 1)];
}

UnitaryOp QueryAlgorithm::unitary(std::size_t t) const { return UnitaryOp(op(t).matrix()); }

QueryAlgorithm build_grover(std::size_t n, std::size_t query_count) {
  const RegisterDims dims(n, 1);
  std::vector<QueryOperator> ops{QueryOperator::uniform_preparation(dims)};
  if (query_count > 0) ops.push_back(QueryOperator::diffusion(dims));
  return {dims, query_count, std::move(ops), "grover(n=" + std::to_string(n) + ")"};
}

QueryAlgorithm build_random_algorithm(RegisterDims dims, std::size_t query_count,
                                      RandomStream stream, std::size_t max_dim) {
  dims.require_within(max_dim);
  std::vector<QueryOperator> ops;
  ops.reserve(query_count + 1);
  for (std::size_t t = 0; t <= query_count; ++t) {
    ops.push_back(QueryOperator::dense(dims, haar_random_unitary(dims.d(), stream)));
  }
  return {dims, query_count, std::move(ops),
          "random" + to_string(dims) + "[seed=" + std::to_string(stream.seed()) +
              ",stream=" + std::to_string(stream.stream_id()) + "]"};
}

QueryAlgorithm build_repeated_grover(std::size_t n, std::size_t rounds, std::size_t max_dim) {
  if (rounds == 0) throw std::invalid_argument("build_repeated_grover: rounds must be >= 1");
  std::size_t m = 1;
  for (std::size_t r = 1; r < rounds; ++r) {
    if (m > max_dim / n) throw SizeCapExceeded("repeated Grover register exceeds cap");
    m *= n;
  }
  const RegisterDims dims(n, m);
  dims.require_within(max_dim);
  const std::string name =
      "repeated-grover(n=" + std::to_string(n) + ",rounds=" + std::to_string(rounds) + ")";
  std::vector<QueryOperator> ops{QueryOperator::uniform_preparation(dims)};
  if (rounds == 1) {
    ops.push_back(QueryOperator::diffusion(dims));
    return {dims, rounds, std::move(ops), name};
  }

  const Matrix prep = QueryOperator::uniform_preparation(dims).matrix();
  const Matrix diff = QueryOperator::diffusion(dims).matrix();
  const auto d = static_cast<Eigen::Index>(dims.d());
  // Ancilla label j - 1 = sum_s digit_s * n^(rounds - 2 - s); slot s holds round s's output.
  for (std::size_t slot = 0; slot + 1 < rounds; ++slot) {
    std::size_t stride = 1;
    for (std::size_t s = slot + 1; s + 1 < rounds; ++s) stride *= n;
    Matrix swap = Matrix::Zero(d, d);
    for (std::size_t q = 0; q < n; ++q) {
      for (std::size_t a = 0; a < m; ++a) {
        const std::size_t digit = (a / stride) % n;
        const std::size_t a_new = a - digit * stride + q * stride;
        swap(static_cast<Eigen::Index>(digit * m + a_new), static_cast<Eigen::Index>(q * m + a)) = 1.0;
      }
    }
    ops.push_back(QueryOperator::dense(dims, UnitaryOp(prep * swap * diff)));
  }
  ops.push_back(QueryOperator::diffusion(dims));
  return {dims, rounds, std::move(ops), name};
}

AcceptanceRule::AcceptanceRule(Matrix projector) : projector_(std::move(projector)) {
  if (projector_.rows() != projector_.cols()) throw std::invalid_argument("projector must be square");
  if (hermiticity_defect(projector_) > 1e-10 ||
      (projector_ * projector_ - projector_).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("acceptance rule is not an orthogonal projector");
  }
}

double AcceptanceRule::accept_probability(const DensityMatrix& rho) const {
  if (rho.entries().rows() != projector_.rows()) throw DimensionMismatch("acceptance rule dims");
  return (projector_ * rho.entries()).trace().real();
}

AcceptanceRule uniform_acceptance_rule(const RegisterDims& dims) {
  const auto d = static_cast<Eigen::Index>(dims.d());
  const auto m = static_cast<Eigen::Index>(dims.m());
  const Vector s = uniform_superposition(dims.n());
  Vector start = Vector::Zero(d);
  for (Eigen::Index i = 0; i < s.size(); ++i) start(i * m) = s(i);
  return AcceptanceRule(Matrix::Identity(d, d) - start * start.adjoint());
}

}  // namespace fgrover
