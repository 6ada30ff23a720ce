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

// Executable form of the faulty-oracle lower-bound argument: sub-normalized
// tracking vectors, the PSD residue, the progress measure H_t with its
// per-query increment bound, the end-of-run bound and the sum over k.

#include <cstddef>
#include <string>
#include <vector>

#include "fgrover/algorithms.hpp"
#include "fgrover/core.hpp"
#include "fgrover/evolution.hpp"
#include "fgrover/oracle.hpp"

namespace fgrover {

/// Absolute tolerance for every lemma-level assertion (d <= 256, T <= 50).
inline constexpr double kLemmaTolerance = 1e-9;
/// Relative (per query) tolerance for the sums over k and t.
inline constexpr double kAggregateTolerance = 1e-8;
/// Distinguishability required of a correct decision algorithm.
inline constexpr double kCorrectnessDistance = 0.9;
/// Lower bound on H_T implied by correctness.
inline constexpr double kFinalProgress = 0.1;

struct TrackingTrace {
  /// psi_t^k = U_t psi~_t^k, t = 0..T.
  std::vector<StateVector> psi;
  /// psi~_t^k, t = 0..T; psi~_0 = |1,1>.
  std::vector<StateVector> psi_tilde;
  /// psi_t^0 of the null run; always unit norm.
  std::vector<StateVector> psi_null;
  std::size_t k;
  double p;
  RegisterDims dims;
};

/// psi~_{t+1} = psi_t - 2(1-p)|k, beta_{t,k}> (via lemma_decompose); the null
/// sequence just applies the unitaries. Throws for k = 0.
TrackingTrace track_states(const QueryAlgorithm& alg, const FaultyOracleSpec& spec);

struct ResidueResult {
  Matrix residue;
  double min_eig;
  double trace;
};

/// R = rho_t - |psi_t><psi_t|, with its smallest eigenvalue and trace.
ResidueResult residue(const DensityMatrix& rho, const StateVector& psi);

struct ProgressTrace {
  /// H_t = || psi_t^0 - psi_t^k ||^2, t = 0..T, each computed directly.
  std::vector<double> h;
  /// H_{t+1} - H_t, t = 0..T-1.
  std::vector<double> increments;
  /// ((1-p)/p) ||beta^0_{t,k}||^2, t = 0..T-1.
  std::vector<double> bounds;
  /// ||beta^0_{t,k}||^2, t = 0..T.
  std::vector<double> null_block_weight;
  /// ||psi_t^k||^2, t = 0..T.
  std::vector<double> psi_norm_sq;
  /// Filled only by the overload that receives the exact simulation.
  std::vector<double> residue_min_eig;
  std::vector<double> residue_trace;
  /// <psi_T^0 | psi_T^k>.
  Complex final_overlap;
  double final_null_norm_sq = 1.0;
  std::size_t k = 0;
  double p = 0.0;

  [[nodiscard]] std::size_t query_count() const { return increments.size(); }
  [[nodiscard]] bool has_residues() const { return !residue_min_eig.empty(); }
};

ProgressTrace progress_measure(const TrackingTrace& trace);

/// Same, plus residue spectra against the matching exact simulation.
ProgressTrace progress_measure(const TrackingTrace& trace, const SimulationTrace& sim);

enum class BoundStatus { kHolds, kViolated, kNotApplicable };

std::string to_string(BoundStatus status);

struct FinalBoundReport {
  BoundStatus status;
  double h_final;
  double d_final;
  /// 1 - 2|<psi_T^0|psi_T^k>|.
  double chain_lower;
  bool chain_holds;
  /// |H_T - (||psi^0||^2 + ||psi^k||^2 - 2 Re<psi^0|psi^k>)|.
  double identity_error;
  bool identity_holds;

  [[nodiscard]] bool ok() const {
    return status != BoundStatus::kViolated && chain_holds && identity_holds;
  }
};

/// If d_final >= 9/10, H_T > 1/10 must hold; otherwise the bound is not
/// applicable. The chain inequality and the expansion identity are checked
/// unconditionally.
FinalBoundReport final_bound_check(const ProgressTrace& progress, double d_final);

/// p n / (10 (1 - p)): a correct algorithm must make more queries than this.
double theorem_query_threshold(std::size_t n, double p);

struct TheoremReport {
  std::size_t n = 0;
  std::size_t query_count = 0;
  double p = 0.0;
  /// H_T for k = 1..n (index k - 1).
  std::vector<double> h_final;
  std::vector<double> distinguishability;
  /// sum_k sum_{t<T} ||beta^0_{t,k}||^2; equals T.
  double null_weight_sum = 0.0;
  double sum_h = 0.0;
  /// ((1-p)/p) T.
  double budget = 0.0;
  double threshold = 0.0;
  bool identity_holds = false;
  bool budget_holds = false;
  /// distinguishability >= 9/10 for every k.
  bool correct_for_all_k = false;
  /// When correct_for_all_k: T > threshold. Vacuously true otherwise.
  bool lower_bound_holds = false;

  [[nodiscard]] bool ok() const { return identity_holds && budget_holds && lower_bound_holds; }
};

/// Runs the tracking for every k in 1..n and checks the aggregate
/// statements; distinguishability comes from evolve_exact.
TheoremReport aggregate_theorem_check(const QueryAlgorithm& alg, double p,
                                      std::size_t max_dim = kDefaultMaxDim);

}  // namespace fgrover
