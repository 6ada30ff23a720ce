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

// Exact density-matrix evolution, stochastic trajectories, and the
// random-walk hitting-time experiment for faulty Grover search.
//
// Step order: rho~_0 = |1,1><1,1|, rho_0 = U_0 rho~_0 U_0^dag, then for each
// query rho~_{t+1} = channel(rho_t) and rho_{t+1} = U_{t+1} rho~_{t+1} U_{t+1}^dag.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fgrover/algorithms.hpp"
#include "fgrover/core.hpp"
#include "fgrover/oracle.hpp"
#include "fgrover/random.hpp"

namespace fgrover {

struct SimulationTrace {
  /// rho~_t: state before U_t (after the oracle for t >= 1).
  std::vector<DensityMatrix> rho_pre;
  /// rho_t: state after U_t.
  std::vector<DensityMatrix> rho_post;
  FaultyOracleSpec spec;
  std::string algorithm;

  [[nodiscard]] const DensityMatrix& final_state() const { return rho_post.back(); }
};

/// O(T d^3) for dense unitaries. Throws SizeCapExceeded above max_dim.
SimulationTrace evolve_exact(const QueryAlgorithm& alg, const FaultyOracleSpec& spec,
                             std::size_t max_dim = kDefaultMaxDim);

struct TrajectoryResult {
  StateVector final_state;
  /// fault_pattern[t] is true when query t + 1 faulted.
  std::vector<bool> fault_pattern;
  /// One measurement of the query register against k; empty for k = 0.
  std::optional<bool> success_sample;
};

/// Called after every U_t with the current amplitudes; returning false stops
/// the trajectory early.
using TrajectoryObserver = std::function<bool(std::size_t t, const Vector& amplitudes)>;

TrajectoryResult evolve_trajectory(const QueryAlgorithm& alg, const FaultyOracleSpec& spec,
                                   RandomStream& stream, const TrajectoryObserver& observer = {});

/// Replays an explicit fault pattern (length T); no measurement is sampled.
TrajectoryResult evolve_with_faults(const QueryAlgorithm& alg, const FaultyOracleSpec& spec,
                                    std::span<const bool> faults);

/// Trace distance between the final states for oracle k and the null oracle.
double distinguishability(const QueryAlgorithm& alg, const FaultyOracleSpec& spec,
                          std::size_t max_dim = kDefaultMaxDim);

/// Probability that measuring the query register yields k.
double success_probability(const StateVector& state, std::size_t k);
double success_probability(const DensityMatrix& rho, std::size_t k);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

/// Monte-Carlo estimate over `trials` trajectories. Each trial contributes its
/// conditional success probability |<k|psi>|^2 (the expectation of the
/// measurement indicator given the fault pattern). Trial i uses stream.split(i).
Estimate grover_success_probability(const QueryAlgorithm& alg, const FaultyOracleSpec& spec,
                                    std::size_t trials, const RandomStream& stream);

/// tr((|k><k| (x) I) rho_T) from evolve_exact.
double grover_success_exact(const QueryAlgorithm& alg, const FaultyOracleSpec& spec,
                            std::size_t max_dim = kDefaultMaxDim);

/// Success estimates after T = 0..t_max Grover iterations, all read off the
/// same trajectories (a prefix of a faulty Grover run is itself a faulty
/// Grover run).
std::vector<Estimate> grover_success_curve(std::size_t n, const FaultyOracleSpec& spec,
                                           std::size_t t_max, std::size_t trials,
                                           const RandomStream& stream);

/// Per trial, the first query count T at which |<k|psi_T>|^2 >= threshold on a
/// faulty Grover trajectory with k = 1, or max_t if it never happens.
/// Requires 1/n < threshold < 1. p may be a limit (0 or 1).
std::vector<std::size_t> walk_hitting_time(std::size_t n, double p, double threshold,
                                           std::size_t max_t, std::size_t trials,
                                           const RandomStream& stream);

/// Fault-free Grover iteration count to reach `threshold`:
/// ceil(asin(sqrt(threshold)) / (2 theta) - 1/2), sin(theta) = 1/sqrt(n).
std::size_t noiseless_hitting_time(std::size_t n, double threshold);

double median(std::vector<std::size_t> values);

}  // namespace fgrover
