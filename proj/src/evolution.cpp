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

#include "fgrover/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fgrover/parallel.hpp"

namespace fgrover {

namespace {

void check_same_dims(const QueryAlgorithm& alg, const FaultyOracleSpec& spec) {
  if (!(alg.dims() == spec.dims())) {
    throw DimensionMismatch("algorithm acts on " + to_string(alg.dims()) + " but oracle on " +
                            to_string(spec.dims()));
  }
}

double marked_weight(const Vector& amplitudes, const RegisterDims& dims, std::size_t k) {
  const auto m = static_cast<Eigen::Index>(dims.m());
  return amplitudes.segment(static_cast<Eigen::Index>(dims.flat_index(k, 1)), m).squaredNorm();
}

Estimate summarize(double sum, double sum_sq, std::size_t trials) {
  const auto count = static_cast<double>(trials);
  const double mean = sum / count;
  double var = 0.0;
  if (trials > 1) var = std::max(0.0, (sum_sq - count * mean * mean) / (count - 1.0));
  return {mean, std::sqrt(var / count), trials};
}

}  // namespace

SimulationTrace evolve_exact(const QueryAlgorithm& alg, const FaultyOracleSpec& spec,
                             std::size_t max_dim) {
  check_same_dims(alg, spec);
  alg.dims().require_within(max_dim);
  SimulationTrace trace{{}, {}, spec, alg.name()};
  trace.rho_pre.reserve(alg.query_count() + 1);
  trace.rho_post.reserve(alg.query_count() + 1);

  trace.rho_pre.push_back(DensityMatrix::pure(alg.initial_state()));
  for (std::size_t t = 0;; ++t) {
    const DensityMatrix& pre = trace.rho_pre.back();
    trace.rho_post.emplace_back(alg.dims(), alg.op(t).conjugate(pre.entries()));
    if (t == alg.query_count()) break;
    trace.rho_pre.push_back(apply_faulty_channel(trace.rho_post.back(), spec));
  }
  return trace;
}

TrajectoryResult evolve_trajectory(const QueryAlgorithm& alg, const FaultyOracleSpec& spec,
                                   RandomStream& stream, const TrajectoryObserver& observer) {
  check_same_dims(alg, spec);
  TrajectoryResult result{alg.initial_state(), {}, std::nullopt};
  result.fault_pattern.reserve(alg.query_count());
  Vector psi = alg.op(0).apply(result.final_state.amplitudes());
  bool keep_going = !observer || observer(0, psi);
  for (std::size_t t = 1; keep_going && t <= alg.query_count(); ++t) {
    const bool fault = stream.uniform() < spec.p();
    result.fault_pattern.push_back(fault);
    if (!fault) apply_perfect_oracle(psi, spec);
    psi = alg.op(t).apply(psi);
    if (observer) keep_going = observer(t, psi);
  }
  // Renormalize away rounding drift accumulated over long runs.
  psi /= psi.norm();
  result.final_state = StateVector(alg.dims(), std::move(psi));
  if (!spec.is_null()) {
    const double prob = success_probability(result.final_state, spec.k());
    result.success_sample = stream.uniform() < prob;
  }
  return result;
}

TrajectoryResult evolve_with_faults(const QueryAlgorithm& alg, const FaultyOracleSpec& spec,
                                    std::span<const bool> faults) {
  check_same_dims(alg, spec);
  if (faults.size() != alg.query_count()) {
    throw std::invalid_argument("fault pattern length must equal the query count");
  }
  Vector psi = alg.op(0).apply(alg.initial_state().amplitudes());
  for (std::size_t t = 1; t <= alg.query_count(); ++t) {
    if (!faults[t - 1]) apply_perfect_oracle(psi, spec);
    psi = alg.op(t).apply(psi);
  }
  return {StateVector(alg.dims(), std::move(psi)), {faults.begin(), faults.end()}, std::nullopt};
}

double distinguishability(const QueryAlgorithm& alg, const FaultyOracleSpec& spec,
                          std::size_t max_dim) {
  if (spec.is_null()) throw std::invalid_argument("distinguishability needs k >= 1");
  const auto marked = evolve_exact(alg, spec, max_dim);
  const auto null = evolve_exact(alg, spec.with_marked(0), max_dim);
  return trace_distance(marked.final_state(), null.final_state());
}

double success_probability(const StateVector& state, std::size_t k) {
  return marked_weight(state.amplitudes(), state.dims(), k);
}

double success_probability(const DensityMatrix& rho, std::size_t k) {
  const auto m = static_cast<Eigen::Index>(rho.dims().m());
  const auto lo = static_cast<Eigen::Index>(rho.dims().flat_index(k, 1));
  return rho.entries().diagonal().segment(lo, m).real().sum();
}

Estimate grover_success_probability(const QueryAlgorithm& alg, const FaultyOracleSpec& spec,
                                    std::size_t trials, const RandomStream& stream) {
  if (spec.is_null()) throw std::invalid_argument("success probability needs k >= 1");
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  std::vector<double> samples(trials);
  parallel_for(trials, [&](std::size_t i) {
    RandomStream local = stream.split(i);
    samples[i] = success_probability(evolve_trajectory(alg, spec, local).final_state, spec.k());
  });
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double s : samples) {
    sum += s;
    sum_sq += s * s;
  }
  return summarize(sum, sum_sq, trials);
}

double grover_success_exact(const QueryAlgorithm& alg, const FaultyOracleSpec& spec,
                            std::size_t max_dim) {
  if (spec.is_null()) throw std::invalid_argument("success probability needs k >= 1");
  return success_probability(evolve_exact(alg, spec, max_dim).final_state(), spec.k());
}

std::vector<Estimate> grover_success_curve(std::size_t n, const FaultyOracleSpec& spec,
                                           std::size_t t_max, std::size_t trials,
                                           const RandomStream& stream) {
  if (spec.is_null()) throw std::invalid_argument("success probability needs k >= 1");
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  const QueryAlgorithm alg = build_grover(n, t_max);
  check_same_dims(alg, spec);
  // samples[i * (t_max + 1) + t]
  std::vector<double> samples(trials * (t_max + 1));
  parallel_for(trials, [&](std::size_t i) {
    RandomStream local = stream.split(i);
    evolve_trajectory(alg, spec, local, [&](std::size_t t, const Vector& psi) {
      samples[i * (t_max + 1) + t] = marked_weight(psi, alg.dims(), spec.k());
      return true;
    });
  });
  std::vector<Estimate> curve;
  curve.reserve(t_max + 1);
  for (std::size_t t = 0; t <= t_max; ++t) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
      const double s = samples[i * (t_max + 1) + t];
      sum += s;
      sum_sq += s * s;
    }
    curve.push_back(summarize(sum, sum_sq, trials));
  }
  return curve;
}

std::vector<std::size_t> walk_hitting_time(std::size_t n, double p, double threshold,
                                           std::size_t max_t, std::size_t trials,
                                           const RandomStream& stream) {
  if (!(threshold > 1.0 / static_cast<double>(n) && threshold < 1.0)) {
    throw std::invalid_argument("threshold must lie in (1/n, 1)");
  }
  const QueryAlgorithm alg = build_grover(n, max_t);
  const auto spec = FaultyOracleSpec::with_limits(alg.dims(), 1, p);
  std::vector<std::size_t> hits(trials, max_t);
  parallel_for(trials, [&](std::size_t i) {
    RandomStream local = stream.split(i);
    evolve_trajectory(alg, spec, local, [&](std::size_t t, const Vector& psi) {
      if (std::norm(psi(0)) >= threshold) {
        hits[i] = t;
        return false;
      }
      return true;
    });
  });
  return hits;
}

std::size_t noiseless_hitting_time(std::size_t n, double threshold) {
  const double theta = std::asin(1.0 / std::sqrt(static_cast<double>(n)));
  const double t = std::ceil(std::asin(std::sqrt(threshold)) / (2.0 * theta) - 0.5);
  return t <= 0.0 ? 0 : static_cast<std::size_t>(t);
}

double median(std::vector<std::size_t> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = static_cast<double>(values[mid]);
  if (values.size() % 2 == 1) return upper;
  const double lower = static_cast<double>(*std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid)));
  return 0.5 * (lower + upper);
}

}  // namespace fgrover
