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

#include "fgrover/progress.hpp"

#include <cmath>
#include <stdexcept>

namespace fgrover {

namespace {

double block_weight(const StateVector& state, std::size_t k) {
  const auto& dims = state.dims();
  const auto m = static_cast<Eigen::Index>(dims.m());
  return state.amplitudes().segment(static_cast<Eigen::Index>(dims.flat_index(k, 1)), m).squaredNorm();
}

}  // namespace

TrackingTrace track_states(const QueryAlgorithm& alg, const FaultyOracleSpec& spec) {
  if (spec.is_null()) throw std::invalid_argument("track_states needs k >= 1");
  if (!(alg.dims() == spec.dims())) throw DimensionMismatch("track_states: dims differ");
  const auto& dims = alg.dims();
  TrackingTrace trace{{}, {}, {}, spec.k(), spec.p(), dims};
  const std::size_t steps = alg.query_count() + 1;
  trace.psi.reserve(steps);
  trace.psi_tilde.reserve(steps);
  trace.psi_null.reserve(steps);

  trace.psi_tilde.push_back(alg.initial_state());
  StateVector null_tilde = alg.initial_state();
  for (std::size_t t = 0;; ++t) {
    const QueryOperator& u = alg.op(t);
    trace.psi.emplace_back(dims, u.apply(trace.psi_tilde.back().amplitudes()));
    trace.psi_null.emplace_back(dims, u.apply(null_tilde.amplitudes()));
    if (t == alg.query_count()) break;
    trace.psi_tilde.push_back(lemma_decompose(trace.psi.back(), spec).phi_tilde);
    null_tilde = trace.psi_null.back();
  }
  return trace;
}

ResidueResult residue(const DensityMatrix& rho, const StateVector& psi) {
  if (!(rho.dims() == psi.dims())) throw DimensionMismatch("residue: dims differ");
  const Vector& v = psi.amplitudes();
  Matrix r = rho.entries() - v * v.adjoint();
  const double lo = min_eigenvalue(r);
  const double tr = r.trace().real();
  return {std::move(r), lo, tr};
}

ProgressTrace progress_measure(const TrackingTrace& trace) {
  ProgressTrace out;
  out.k = trace.k;
  out.p = trace.p;
  const std::size_t steps = trace.psi.size();
  const double ratio = (1.0 - trace.p) / trace.p;
  for (std::size_t t = 0; t < steps; ++t) {
    const Vector& null = trace.psi_null[t].amplitudes();
    const Vector& marked = trace.psi[t].amplitudes();
    out.h.push_back((null - marked).squaredNorm());
    out.null_block_weight.push_back(block_weight(trace.psi_null[t], trace.k));
    out.psi_norm_sq.push_back(marked.squaredNorm());
  }
  for (std::size_t t = 0; t + 1 < steps; ++t) {
    out.increments.push_back(out.h[t + 1] - out.h[t]);
    out.bounds.push_back(ratio * out.null_block_weight[t]);
  }
  out.final_overlap = trace.psi_null.back().amplitudes().dot(trace.psi.back().amplitudes());
  out.final_null_norm_sq = trace.psi_null.back().squared_norm();
  return out;
}

ProgressTrace progress_measure(const TrackingTrace& trace, const SimulationTrace& sim) {
  if (sim.rho_post.size() != trace.psi.size() || sim.spec.k() != trace.k || sim.spec.p() != trace.p) {
    throw std::invalid_argument("simulation does not match the tracking run");
  }
  ProgressTrace out = progress_measure(trace);
  for (std::size_t t = 0; t < trace.psi.size(); ++t) {
    const auto r = residue(sim.rho_post[t], trace.psi[t]);
    out.residue_min_eig.push_back(r.min_eig);
    out.residue_trace.push_back(r.trace);
  }
  return out;
}

std::string to_string(BoundStatus status) {
  switch (status) {
    case BoundStatus::kHolds: return "holds";
    case BoundStatus::kViolated: return "violated";
    case BoundStatus::kNotApplicable: return "not applicable";
  }
  return "unknown";
}

FinalBoundReport final_bound_check(const ProgressTrace& progress, double d_final) {
  FinalBoundReport report{};
  report.h_final = progress.h.back();
  report.d_final = d_final;
  if (d_final >= kCorrectnessDistance) {
    report.status = report.h_final > kFinalProgress ? BoundStatus::kHolds : BoundStatus::kViolated;
  } else {
    report.status = BoundStatus::kNotApplicable;
  }
  const double overlap = std::abs(progress.final_overlap);
  report.chain_lower = 1.0 - 2.0 * overlap;
  report.chain_holds = report.h_final >= report.chain_lower - kLemmaTolerance;
  const double expanded = progress.final_null_norm_sq + progress.psi_norm_sq.back() -
                          2.0 * progress.final_overlap.real();
  report.identity_error = std::abs(report.h_final - expanded);
  report.identity_holds = report.identity_error <= 1e-10;
  return report;
}

double theorem_query_threshold(std::size_t n, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0, 1)");
  return p * static_cast<double>(n) / (10.0 * (1.0 - p));
}

TheoremReport aggregate_theorem_check(const QueryAlgorithm& alg, double p, std::size_t max_dim) {
  alg.dims().require_within(max_dim);
  TheoremReport report;
  const std::size_t n = alg.dims().n();
  const std::size_t big_t = alg.query_count();
  report.n = n;
  report.query_count = big_t;
  report.p = p;
  report.threshold = theorem_query_threshold(n, p);
  report.budget = (1.0 - p) / p * static_cast<double>(big_t);

  const auto null_sim = evolve_exact(alg, FaultyOracleSpec(alg.dims(), 0, p), max_dim);
  report.correct_for_all_k = true;
  for (std::size_t k = 1; k <= n; ++k) {
    const FaultyOracleSpec spec(alg.dims(), k, p);
    const auto progress = progress_measure(track_states(alg, spec));
    for (std::size_t t = 0; t < big_t; ++t) report.null_weight_sum += progress.null_block_weight[t];
    report.h_final.push_back(progress.h.back());
    report.sum_h += progress.h.back();
    const auto sim = evolve_exact(alg, spec, max_dim);
    const double dist = trace_distance(sim.final_state(), null_sim.final_state());
    report.distinguishability.push_back(dist);
    if (dist < kCorrectnessDistance) report.correct_for_all_k = false;
  }
  const double slack = kAggregateTolerance * static_cast<double>(big_t);
  report.identity_holds = std::abs(report.null_weight_sum - static_cast<double>(big_t)) <= slack;
  report.budget_holds = report.sum_h <= report.budget + slack;
  report.lower_bound_holds =
      !report.correct_for_all_k || static_cast<double>(big_t) > report.threshold;
  return report;
}

}  // namespace fgrover
