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

#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "fgrover/evolution.hpp"
#include "support.hpp"

using namespace fgrover;
using namespace fgrover::testing;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// n = 2 Grover preparation followed by a single query and U_1 = I.
QueryAlgorithm single_query_identity() {
  const RegisterDims dims(2, 1);
  return {dims, 1,
          {QueryOperator::uniform_preparation(dims), QueryOperator::dense(dims, UnitaryOp(Matrix::Identity(2, 2)))},
          "single-query"};
}

}  // namespace

TEST_CASE("evolve_exact follows the oracle/unitary alternation") {
  const RegisterDims dims(3, 2);
  const auto alg = build_random_algorithm(dims, 4, RandomStream(5, 5));
  const FaultyOracleSpec spec(dims, 2, 0.3);
  const auto sim = evolve_exact(alg, spec);
  REQUIRE(sim.rho_pre.size() == 5);
  REQUIRE(sim.rho_post.size() == 5);
  Matrix e0 = Matrix::Zero(6, 6);
  e0(0, 0) = 1.0;
  CHECK(sim.rho_pre[0].entries() == e0);
  for (std::size_t t = 0; t <= 4; ++t) {
    const Matrix u = alg.unitary(t).entries();
    CHECK(max_abs(sim.rho_post[t].entries() - u * sim.rho_pre[t].entries() * u.adjoint()) <= 1e-10);
    if (t < 4) {
      CHECK(max_abs(sim.rho_pre[t + 1].entries() - kraus_channel(sim.rho_post[t].entries(), dims, 2, 0.3)) <= 1e-10);
    }
    CHECK(density_violation(sim.rho_post[t]).empty());
    CHECK(std::abs(sim.rho_post[t].trace() - 1.0) <= 1e-9);
  }
  // Independent route: weighted sum over all 2^T fault patterns.
  CHECK(max_abs(sim.final_state().entries() - enumerate_fault_patterns(alg, 2, 0.3)) <= 1e-10);

  CHECK_THROWS_AS(evolve_exact(alg, FaultyOracleSpec(RegisterDims(2, 3), 1, 0.3)), DimensionMismatch);
  CHECK_THROWS_AS(evolve_exact(alg, spec, 4), SizeCapExceeded);
}

TEST_CASE("evolve_exact special cases") {
  SUBCASE("null oracle keeps every state pure") {
    const auto alg = build_random_algorithm(RegisterDims(4, 2), 6, RandomStream(6, 0));
    const auto sim = evolve_exact(alg, FaultyOracleSpec(alg.dims(), 0, 0.4));
    for (const auto& rho : sim.rho_post) {
      CHECK(std::abs((rho.entries() * rho.entries()).trace().real() - 1.0) <= 1e-9);
    }
  }
  SUBCASE("p = 0 equals the pure state-vector run") {
    const auto alg = build_random_algorithm(RegisterDims(4, 2), 6, RandomStream(6, 1));
    const auto spec = FaultyOracleSpec::with_limits(alg.dims(), 3, 0.0);
    const auto sim = evolve_exact(alg, spec);
    Vector psi = alg.unitary(0).entries() * Vector::Unit(8, 0);
    const Matrix o = dense_oracle(alg.dims(), 3);
    for (std::size_t t = 1; t <= 6; ++t) psi = alg.unitary(t).entries() * (o * psi);
    CHECK(max_abs(sim.final_state().entries() - psi * psi.adjoint()) <= 1e-10);
  }
  SUBCASE("single query with identity post-unitary gives I/2") {
    const auto alg = single_query_identity();
    const auto sim = evolve_exact(alg, FaultyOracleSpec(alg.dims(), 1, 0.5));
    CHECK(max_abs(sim.final_state().entries() - 0.5 * Matrix::Identity(2, 2)) <= 1e-15);
  }
}

TEST_CASE("evolve_trajectory") {
  const auto alg = build_grover(4, 3);
  SUBCASE("all faults leave only the unitaries") {
    const auto spec = FaultyOracleSpec::with_limits(alg.dims(), 2, 1.0);
    RandomStream rng(1, 1);
    const auto traj = evolve_trajectory(alg, spec, rng);
    CHECK(traj.fault_pattern == std::vector<bool>{true, true, true});
    Vector psi = Vector::Unit(4, 0);
    for (std::size_t t = 0; t <= 3; ++t) psi = alg.unitary(t).entries() * psi;
    CHECK(max_abs(traj.final_state.amplitudes() - psi) <= 1e-12);
  }
  SUBCASE("no faults is the fault-free algorithm") {
    const auto spec = FaultyOracleSpec::with_limits(alg.dims(), 2, 0.0);
    RandomStream rng(1, 2);
    const auto traj = evolve_trajectory(alg, spec, rng);
    CHECK(traj.fault_pattern == std::vector<bool>{false, false, false});
    const bool none[3] = {false, false, false};
    CHECK(max_abs(traj.final_state.amplitudes() - evolve_with_faults(alg, spec, none).final_state.amplitudes()) <= 1e-12);
    CHECK(traj.success_sample.has_value());
  }
  SUBCASE("replayed pattern matches the dense product") {
    const auto random = build_random_algorithm(RegisterDims(3, 2), 4, RandomStream(9, 9));
    const FaultyOracleSpec spec(random.dims(), 3, 0.4);
    const bool pattern[4] = {true, false, false, true};
    Vector psi = random.unitary(0).entries() * Vector::Unit(6, 0);
    const Matrix o = dense_oracle(random.dims(), 3);
    for (std::size_t t = 1; t <= 4; ++t) psi = random.unitary(t).entries() * (pattern[t - 1] ? psi : Vector(o * psi));
    CHECK(max_abs(evolve_with_faults(random, spec, pattern).final_state.amplitudes() - psi) <= 1e-12);
    RandomStream rng(2, 2);
    CHECK(std::abs(evolve_trajectory(random, spec, rng).final_state.squared_norm() - 1.0) <= 1e-9);
  }
  SUBCASE("Monte-Carlo success matches the exact value (n=4, p=0.5, T=3)") {
    const FaultyOracleSpec spec(alg.dims(), 1, 0.5);
    const auto est = grover_success_probability(alg, spec, 100000, RandomStream(42, 0));
    const double exact = grover_success_exact(alg, spec);
    CHECK(est.trials == 100000);
    CHECK(std::abs(est.mean - exact) <= 3.0 * est.std_error);
  }
}

TEST_CASE("distinguishability") {
  CHECK(distinguishability(build_grover(4, 0), FaultyOracleSpec(RegisterDims(4, 1), 2, 0.5)) ==
        doctest::Approx(0.0));
  const auto one = build_grover(4, 1);
  CHECK(distinguishability(one, FaultyOracleSpec::with_limits(one.dims(), 1, 0.0)) ==
        doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-10));
  const auto random = build_random_algorithm(RegisterDims(4, 2), 5, RandomStream(3, 3));
  CHECK(distinguishability(random, FaultyOracleSpec::with_limits(random.dims(), 2, 1.0)) <= 1e-12);
  CHECK_THROWS_AS(distinguishability(one, FaultyOracleSpec(one.dims(), 0, 0.5)), std::invalid_argument);

  SUBCASE("invariant under a final unitary") {
    const RegisterDims dims(3, 2);
    const auto base = build_random_algorithm(dims, 3, RandomStream(4, 4));
    RandomStream rng(4, 5);
    const Matrix v = haar_random_unitary(6, rng).entries();
    std::vector<QueryOperator> ops;
    for (std::size_t t = 0; t < 3; ++t) ops.push_back(base.op(t));
    ops.push_back(QueryOperator::dense(dims, UnitaryOp(v * base.unitary(3).entries())));
    const QueryAlgorithm rotated(dims, 3, ops, "rotated");
    for (std::size_t k = 1; k <= 3; ++k) {
      for (double p : {0.1, 0.5, 0.9}) {
        const FaultyOracleSpec spec(dims, k, p);
        CHECK(std::abs(distinguishability(rotated, spec) - distinguishability(base, spec)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("grover_success_probability") {
  const auto one = build_grover(4, 1);
  const auto free_spec = FaultyOracleSpec::with_limits(one.dims(), 1, 0.0);
  const auto est = grover_success_probability(one, free_spec, 100, RandomStream(1, 0));
  CHECK(est.mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(grover_success_exact(one, free_spec) == doctest::Approx(1.0).epsilon(1e-12));

  const auto zero = build_grover(8, 0);
  CHECK(grover_success_probability(zero, FaultyOracleSpec(zero.dims(), 3, 0.5), 50, RandomStream(1, 1)).mean ==
        doctest::Approx(1.0 / 8.0).epsilon(1e-12));

  const auto many = build_grover(8, 7);
  const auto inert = FaultyOracleSpec::with_limits(many.dims(), 5, 1.0);
  CHECK(grover_success_probability(many, inert, 50, RandomStream(1, 2)).mean == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(grover_success_exact(many, inert) == doctest::Approx(0.125).epsilon(1e-12));

  CHECK_THROWS_AS(grover_success_probability(one, free_spec, 0, RandomStream(1, 3)), std::invalid_argument);

  SUBCASE("curve prefix agrees with per-T estimates") {
    const RegisterDims dims(16, 1);
    const FaultyOracleSpec spec(dims, 1, 0.3);
    const auto curve = grover_success_curve(16, spec, 6, 4000, RandomStream(9, 0));
    REQUIRE(curve.size() == 7);
    const auto sim = evolve_exact(build_grover(16, 6), spec);
    for (std::size_t t = 0; t <= 6; ++t) {
      const double exact = success_probability(sim.rho_post[t], 1);
      CHECK(std::abs(curve[t].mean - exact) <= std::max(4.0 * curve[t].std_error, 1e-12));
    }
  }
}

TEST_CASE("walk_hitting_time") {
  SUBCASE("p = 0 reproduces the noiseless rotation count") {
    for (std::size_t n : {16, 64, 256, 1024}) {
      for (double thr : {0.5, 0.9}) {
        const std::size_t expected = noiseless_hitting_time(n, thr);
        // Closed form cross-check: first T with sin^2((2T+1)theta) >= thr.
        std::size_t brute = 0;
        while (grover_closed_form(n, brute) < thr) ++brute;
        CHECK(expected == brute);
        for (auto h : walk_hitting_time(n, 0.0, thr, 10 * n, 5, RandomStream(1, n))) CHECK(h == expected);
      }
    }
  }
  SUBCASE("p = 1 never hits") {
    for (auto h : walk_hitting_time(64, 1.0, 0.5, 300, 20, RandomStream(2, 0))) CHECK(h == 300);
  }
  SUBCASE("empirical distribution matches the exact walk chain") {
    constexpr std::size_t kTrials = 4000;
    const std::size_t n = 64;
    const auto hits = walk_hitting_time(n, 0.5, 0.5, 2000, kTrials, RandomStream(3, 0));
    const auto cdf = walk_hitting_cdf(n, 0.5, 0.5, 2000);
    for (std::size_t t : {3, 5, 9, 15, 30, 60}) {
      const double empirical =
          static_cast<double>(std::count_if(hits.begin(), hits.end(), [&](std::size_t h) { return h <= t; })) / kTrials;
      const double se = std::sqrt(cdf[t] * (1.0 - cdf[t]) / kTrials);
      CHECK(std::abs(empirical - cdf[t]) <= 4.0 * se + 1e-12);
    }
  }
  CHECK_THROWS_AS(walk_hitting_time(64, 0.5, 0.01, 10, 1, RandomStream(0, 0)), std::invalid_argument);
  CHECK_THROWS_AS(walk_hitting_time(64, 0.5, 1.0, 10, 1, RandomStream(0, 0)), std::invalid_argument);
}

TEST_CASE("median") {
  CHECK(median({5, 1, 3}) == 3.0);
  CHECK(median({4, 1, 3, 2}) == 2.5);
  CHECK_THROWS_AS(median({}), std::invalid_argument);
}
