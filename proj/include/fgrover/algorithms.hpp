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

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "fgrover/core.hpp"
#include "fgrover/random.hpp"

namespace fgrover {

/// One of the unitaries U_t of a query algorithm.
///
/// Grover's two structured operators act on the query register only and are
/// applied in O(d) without materializing a matrix, which lets trajectory
/// experiments run far beyond the dense size cap.
class QueryOperator {
 public:
  enum class Kind {
    kDense,
    /// Householder reflection sending |1> to the uniform |s>, (x) I_m.
    kUniformPreparation,
    /// Grover diffusion 2|s><s| - I, (x) I_m.
    kDiffusion,
  };

  static QueryOperator dense(RegisterDims dims, UnitaryOp op);
  static QueryOperator uniform_preparation(RegisterDims dims);
  static QueryOperator diffusion(RegisterDims dims);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] const RegisterDims& dims() const { return dims_; }

  [[nodiscard]] Vector apply(const Vector& x) const;
  /// U rho U^dag.
  [[nodiscard]] Matrix conjugate(const Matrix& rho) const;
  [[nodiscard]] Matrix matrix() const;

 private:
  QueryOperator(Kind kind, RegisterDims dims, std::shared_ptr<const Matrix> dense);

  Kind kind_;
  RegisterDims dims_;
  std::shared_ptr<const Matrix> dense_;
};

/// A T-query algorithm U_0, O, U_1, O, ..., O, U_T started from |1, 1>.
///
/// The operator list may be shorter than T + 1: the last listed operator is
/// reused for every later step. Grover is stored as {prep, diffusion}.
class QueryAlgorithm {
 public:
  QueryAlgorithm(RegisterDims dims, std::size_t query_count, std::vector<QueryOperator> operators,
                 std::string name);

  [[nodiscard]] const RegisterDims& dims() const { return dims_; }
  [[nodiscard]] std::size_t query_count() const { return query_count_; }
  [[nodiscard]] const std::string& name() const { return name_; }

  /// U_t for t in 0..T.
  [[nodiscard]] const QueryOperator& op(std::size_t t) const;
  /// Dense U_t.
  [[nodiscard]] UnitaryOp unitary(std::size_t t) const;

  [[nodiscard]] StateVector initial_state() const { return StateVector::basis(dims_, 1, 1); }

 private:
  RegisterDims dims_;
  std::size_t query_count_;
  std::shared_ptr<const std::vector<QueryOperator>> operators_;
  std::string name_;
};

/// Grover search on n items (m = 1): U_0 prepares |s>, U_t = 2|s><s| - I.
QueryAlgorithm build_grover(std::size_t n, std::size_t query_count);

/// T + 1 independent Haar unitaries on d = n * m, drawn from `stream` in order.
QueryAlgorithm build_random_algorithm(RegisterDims dims, std::size_t query_count,
                                      RandomStream stream, std::size_t max_dim = kDefaultMaxDim);

/// `rounds` independent single-query Grover runs. After each query the
/// diffused query register is swapped into a fresh ancilla slot (prepared
/// as |1>) and the query register is re-prepared in |s>. Uses m = n^(rounds-1)
/// and T = rounds; the final state keeps every round's output.
QueryAlgorithm build_repeated_grover(std::size_t n, std::size_t rounds,
                                     std::size_t max_dim = kDefaultMaxDim);

/// Two-outcome measurement {Pi, I - Pi}; Pi is the "k != 0" verdict.
class AcceptanceRule {
 public:
  explicit AcceptanceRule(Matrix projector);

  [[nodiscard]] const Matrix& projector() const { return projector_; }
  /// tr(Pi rho).
  [[nodiscard]] double accept_probability(const DensityMatrix& rho) const;

 private:
  Matrix projector_;
};

/// Pi = I - |s,1><s,1|.
AcceptanceRule uniform_acceptance_rule(const RegisterDims& dims);

/// The uniform superposition over the query register, length n.
Vector uniform_superposition(std::size_t n);

}  // namespace fgrover
