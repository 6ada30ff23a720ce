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

// The perfect Grover oracle, its p-faulty channel, and the pure-plus-leak
// rewriting of one faulty call used by the progress bookkeeping.

#include <cstddef>

#include "fgrover/core.hpp"
#include "fgrover/random.hpp"

namespace fgrover {

/// Marked index k in 0..n (0 is the null oracle) and fault probability p.
class FaultyOracleSpec {
 public:
  /// Production constructor: requires 0 < p < 1 and k <= n.
  FaultyOracleSpec(RegisterDims dims, std::size_t k, double p);

  /// Also accepts the limits p = 0 (never faults) and p = 1 (always faults).
  static FaultyOracleSpec with_limits(RegisterDims dims, std::size_t k, double p);

  [[nodiscard]] const RegisterDims& dims() const { return dims_; }
  [[nodiscard]] std::size_t k() const { return k_; }
  [[nodiscard]] double p() const { return p_; }
  [[nodiscard]] bool is_null() const { return k_ == 0; }

  /// Same p and dims, different marked index (limits are preserved).
  [[nodiscard]] FaultyOracleSpec with_marked(std::size_t k) const;

 private:
  struct Unchecked {};
  FaultyOracleSpec(RegisterDims dims, std::size_t k, double p, Unchecked);

  RegisterDims dims_;
  std::size_t k_;
  double p_;
};

/// The perfect oracle I - 2|k><k| (x) I_m as a dense matrix; identity for k = 0.
UnitaryOp perfect_oracle(const FaultyOracleSpec& spec);

/// In-place diagonal application of the perfect oracle, O(d).
void apply_perfect_oracle(Vector& amplitudes, const FaultyOracleSpec& spec);

/// (1 - p) O rho O^dag + p rho, evaluated entrywise in O(d^2).
DensityMatrix apply_faulty_channel(const DensityMatrix& rho, const FaultyOracleSpec& spec);

struct OracleSample {
  StateVector state;
  bool fault;
};

/// One draw of the mixture-of-unitaries form of the channel: a fault (state
/// unchanged) with probability p, the perfect oracle otherwise. Consumes one
/// uniform variate; fault iff u < p.
OracleSample sample_faulty_application(const StateVector& state, const FaultyOracleSpec& spec,
                                       RandomStream& stream);

/// The branch of sample_faulty_application selected explicitly.
OracleSample apply_oracle_branch(const StateVector& state, const FaultyOracleSpec& spec, bool fault);

/// phi~ = phi - 2(1-p)|k, beta_k> and the leak |k, beta_k> with weight
/// 4p(1-p), so that channel(|phi><phi|) = |phi~><phi~| + weight |k,beta_k><k,beta_k|.
struct DecomposeResult {
  StateVector phi_tilde;
  AmplitudeBlock leak;
  double leak_weight;

  /// phi~ phi~^dag + weight |k,beta_k><k,beta_k|.
  [[nodiscard]] Matrix reconstruct() const;
};

/// Throws std::invalid_argument for the null oracle (k = 0).
DecomposeResult lemma_decompose(const StateVector& phi, const FaultyOracleSpec& spec);

}  // namespace fgrover
