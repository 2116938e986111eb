// Copyright 2026 The sspg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stop_token>

#include "brute_force.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "sspg/solve.hpp"
#include "sspg/structure.hpp"

using namespace sspg;

namespace {

SolveOptions with_tol(double tol, std::size_t cap = 100000) {
  SolveOptions o;
  o.tol = tol;
  o.max_iter = cap;
  return o;
}

StationaryPolicy pure1(const GameModel& m, Player p, std::size_t c) {
  return pure_policy(m, p, std::vector<std::size_t>(m.num_states(), c));
}

}  // namespace

TEST(ValueIteration, EverettFollowsRecurrence) {
  const GameModel m = fixtures::everett();
  SolveOptions o = with_tol(1e-6);
  o.record_iterates = true;
  const ValueResult r = value_iteration(m, {0.0}, o);
  const std::vector<double> x = oracle::everett_iterates(11);
  ASSERT_GE(r.iterates.size(), 11u);
  for (std::size_t k = 0; k < 11; ++k) EXPECT_NEAR(r.iterates[k][0], x[k], 1e-9) << k;
  EXPECT_EQ(r.trace.status, SolveStatus::Converged);
  // Sublinear: the stop rule fires near k = 1000, well short of the value 1.
  EXPECT_NEAR(r.J[0], 1.0, 2e-3);
}

TEST(ValueIteration, TerminalOnlyStopsAtStageValues) {
  const GameModel m = fixtures::terminal_only({{{3, 0}, {1, 2}}, {{-4}}});
  const ValueResult r = value_iteration(m, {0.0, 0.0}, with_tol(1e-12));
  EXPECT_EQ(r.trace.status, SolveStatus::Converged);
  EXPECT_LE(r.trace.rows.size(), 2u);
  EXPECT_NEAR(r.J[0], 1.5, 1e-12);
  EXPECT_EQ(r.J[1], -4.0);
}

TEST(ValueIteration, ZeroCostIsZeroImmediately) {
  const ValueResult r = value_iteration(fixtures::zero_cost(), {0.0}, with_tol(1e-8));
  EXPECT_EQ(r.J[0], 0.0);
  ASSERT_EQ(r.trace.rows.size(), 1u);
  EXPECT_EQ(r.trace.rows[0].residual, 0.0);
}

TEST(ValueIteration, ReferenceDistanceIsTracked) {
  SolveOptions o = with_tol(1e-10);
  o.reference = std::vector<double>{2.0};
  const ValueResult r = value_iteration(fixtures::self_loop(), {0.0}, o);
  ASSERT_FALSE(r.trace.rows.empty());
  ASSERT_TRUE(r.trace.rows.back().distance_to_ref.has_value());
  EXPECT_LT(*r.trace.rows.back().distance_to_ref, 1e-9);
  EXPECT_NEAR(r.J[0], 2.0, 1e-9);
}

TEST(ValueIteration, DivergenceIsReported) {
  const ValueResult r = value_iteration(fixtures::trap(-1e5), {0.0}, with_tol(1e-8));
  EXPECT_EQ(r.trace.status, SolveStatus::Diverging);
}

TEST(ValueIteration, IterationCapIsReported) {
  const ValueResult r = value_iteration(fixtures::everett(), {0.0}, with_tol(1e-12, 50));
  EXPECT_EQ(r.trace.status, SolveStatus::IterationCap);
  EXPECT_EQ(r.trace.rows.size(), 50u);
}

TEST(ValueIteration, CancellationStopsEarly) {
  std::stop_source src;
  src.request_stop();
  SolveOptions o = with_tol(1e-12);
  o.stop = src.get_token();
  const ValueResult r = value_iteration(fixtures::everett(), {0.0}, o);
  EXPECT_EQ(r.trace.status, SolveStatus::Cancelled);
}

TEST(ValueIteration, TraceCsvHasBlankReferenceColumn) {
  const ValueResult r = value_iteration(fixtures::self_loop(), {0.0}, with_tol(0.3));
  std::ostringstream os;
  write_trace_csv(os, r.trace);
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("iteration,residual,distance_to_ref\n", 0), 0u);
  EXPECT_NE(s.find(",\n"), std::string::npos);
}

TEST(QValueIteration, ScalarFixedPoint) {
  const QValueResult r = q_value_iteration(fixtures::self_loop(), QTable(std::vector<double>{0.0}),
                                           with_tol(1e-12));
  EXPECT_NEAR(r.Q[0], oracle::scalar_fixed_point(1.0, 0.5), 1e-11);
}

TEST(QValueIteration, StartAtFixedPoint) {
  const GameModel m = fixtures::generated(Family::Contraction, 5, 3, 2);
  const ValueResult j = value_iteration(m, std::vector<double>(3, 0.0), with_tol(1e-13));
  const QValueResult q = q_value_iteration(m, q_from_j(m, j.J), with_tol(1e-8));
  ASSERT_FALSE(q.trace.rows.empty());
  EXPECT_LE(q.trace.rows.front().residual, 1e-8);
}

TEST(QValueIteration, EverettValueIsOne) {
  const GameModel m = fixtures::everett();
  const QValueResult r = q_value_iteration(m, QTable(m), with_tol(1e-15, 2'000'000));
  EXPECT_NEAR(j_from_q(m, r.Q)[0], 1.0, 1e-6);
}

TEST(EvaluatePair, EverettPairs) {
  const GameModel m = fixtures::everett();
  const PairEvaluation loop = evaluate_pair(m, pure1(m, Player::I, 1), pure1(m, Player::II, 0));
  EXPECT_TRUE(loop.prolonging);
  EXPECT_TRUE(loop.zero_gain_prolonging);
  EXPECT_EQ(loop.values[0], 0.0);
  EXPECT_FALSE(loop.reaches_termination[0]);

  const PairEvaluation ends = evaluate_pair(m, pure1(m, Player::I, 0), pure1(m, Player::II, 0));
  EXPECT_FALSE(ends.prolonging);
  EXPECT_DOUBLE_EQ(ends.values[0], 1.0);
}

TEST(EvaluatePair, SignedInfinities) {
  const GameModel up = fixtures::trap(1.0);
  const PairEvaluation a = evaluate_pair(up, pure1(up, Player::I, 0), pure1(up, Player::II, 0));
  EXPECT_TRUE(a.any_plus_infinity());
  EXPECT_EQ(a.values[0], std::numeric_limits<double>::infinity());
  const GameModel down = fixtures::trap(-1.0);
  const PairEvaluation b = evaluate_pair(down, pure1(down, Player::I, 0), pure1(down, Player::II, 0));
  EXPECT_TRUE(b.any_minus_infinity());
}

TEST(EvaluatePair, BasinInheritsSign) {
  // State 1 moves to the positive trap at state 2 half the time.
  GameModel m;
  m.add_state("1", {"a"}, {"x"});
  m.add_state("2", {"a"}, {"x"});
  m.set_outcomes(Triplet{0, 0, 0}, {Outcome{0, 0.5, 0.0}, Outcome{2, 0.5, 0.0}});
  m.set_outcomes(Triplet{1, 0, 0}, {Outcome{2, 1.0, 2.0}});
  const PairEvaluation e = evaluate_pair(m, pure1(m, Player::I, 0), pure1(m, Player::II, 0));
  EXPECT_EQ(e.values[0], std::numeric_limits<double>::infinity());
  EXPECT_EQ(e.values[1], std::numeric_limits<double>::infinity());
}

TEST(EvaluatePair, NonProlongingSolvesAffineFixedPoint) {
  std::mt19937_64 rng(31);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const GameModel m = fixtures::generated(Family::Contraction, seed, 4, 3);
    const StationaryPolicy mu = fixtures::random_policy(m, Player::I, rng);
    const StationaryPolicy nu = fixtures::random_policy(m, Player::II, rng);
    const PairEvaluation e = evaluate_pair(m, mu, nu);
    ASSERT_FALSE(e.prolonging);
    const ValueVector t = apply_T_munu(m, mu, nu, e.values);
    for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(t[i], e.values[i], 1e-10);
  }
}

TEST(BestResponseEvaluation, EverettTerminatingColumn) {
  const GameModel m = fixtures::everett();
  const ValueResult r = evaluate_vs_best_response(m, pure1(m, Player::II, 1), with_tol(1e-12));
  EXPECT_NEAR(r.J[0], 0.0, 1e-12);
}

TEST(BestResponseEvaluation, TerminalOnlyIsRowAverageMax) {
  const GameModel m = fixtures::terminal_only({{{3, 0}, {1, 2}}});
  const StationaryPolicy mu{Player::I, {DecisionRule({0.25, 0.75})}};
  const ValueResult r = evaluate_vs_best_response(m, mu, with_tol(1e-12));
  EXPECT_NEAR(r.J[0], std::max(0.25 * 3 + 0.75 * 1, 0.25 * 0 + 0.75 * 2), 1e-12);
}

TEST(BestResponseEvaluation, UpperDominatesLower) {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const GameModel m = fixtures::generated(Family::Contraction, seed, 3, 3);
    const ValueResult up =
        evaluate_vs_best_response(m, fixtures::random_policy(m, Player::I, rng), with_tol(1e-11));
    const ValueResult lo =
        evaluate_vs_best_response(m, fixtures::random_policy(m, Player::II, rng), with_tol(1e-11));
    for (std::size_t i = 0; i < m.num_states(); ++i) EXPECT_GE(up.J[i], lo.J[i] - 1e-9);
  }
}

TEST(PolicyIteration, EverettFromProperStart) {
  const GameModel m = fixtures::everett();
  PolicyIterationOptions o;
  const PolicyIterationResult r = policy_iteration(m, pure1(m, Player::I, 0), o);
  EXPECT_EQ(r.trace.status, SolveStatus::Converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-8);
  EXPECT_FALSE(r.warning.has_value());
}

TEST(PolicyIteration, StartAtOptimumTakesOneStep) {
  const GameModel m = fixtures::terminal_only({{{2, 5}, {1, 3}}});
  const PolicyIterationResult r =
      policy_iteration(m, pure1(m, Player::I, 1), PolicyIterationOptions{});
  EXPECT_EQ(r.policies.size(), 1u);
  EXPECT_EQ(r.x[0], 3.0);
}

TEST(PolicyIteration, PlayerTwoMatchesPlayerOne) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const GameModel m = fixtures::generated(Family::Contraction, seed, 3, 2);
    const PolicyIterationResult a =
        policy_iteration(m, pure1(m, Player::I, 0), PolicyIterationOptions{});
    const PolicyIterationResult b =
        policy_iteration(m, pure1(m, Player::II, 0), PolicyIterationOptions{});
    EXPECT_EQ(b.policies.back().player, Player::II);
    for (std::size_t i = 0; i < m.num_states(); ++i) EXPECT_NEAR(a.x[i], b.x[i], 1e-6);
  }
}

TEST(PolicyIteration, WarnsOnUncheckedStart) {
  // Player I playing control 2 lets player II loop forever at zero cost.
  const GameModel m = fixtures::everett();
  const PolicyIterationResult r =
      policy_iteration(m, pure1(m, Player::I, 1), PolicyIterationOptions{});
  EXPECT_TRUE(r.warning.has_value());
}

class SolveProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(SolveProperties, ResidualUniquenessConsistencyAndSandwich) {
  const std::uint64_t seed = GetParam();
  const GameModel m = fixtures::generated(Family::Contraction, seed, 1 + seed % 4, 1 + seed % 3,
                                          0.3, -2.0, 2.0);
  const std::size_t n = m.num_states();
  const double tol = 1e-9;
  const ValueResult base = value_iteration(m, std::vector<double>(n, 0.0), with_tol(tol));
  ASSERT_EQ(base.trace.status, SolveStatus::Converged);
  EXPECT_LE(sup_distance(base.J, apply_T(m, base.J)), 2 * tol);

  std::mt19937_64 rng(seed);
  for (int k = 0; k < 20; ++k) {
    const ValueResult r = value_iteration(m, fixtures::random_vector(n, rng), with_tol(tol));
    EXPECT_LE(sup_distance(r.J, base.J), 10 * tol);
  }

  const QValueResult q = q_value_iteration(m, QTable(m), with_tol(tol));
  EXPECT_LE(sup_distance(j_from_q(m, q.Q), base.J), 10 * tol);

  const PolicyIterationResult pi =
      policy_iteration(m, pure1(m, Player::I, 0), PolicyIterationOptions{});
  for (std::size_t t = 0; t < pi.values.size(); ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_GE(pi.values[t][i], base.J[i] - 10 * tol);
      if (t > 0) EXPECT_LE(pi.values[t][i], pi.values[t - 1][i] + 1e-8);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Generated, SolveProperties, ::testing::Range<std::uint64_t>(1, 21));

TEST(SolveBruteForce, SequentialGamesMatchPurePairEnumeration) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const GameModel m = fixtures::generated(Family::Sequential, seed, 1 + seed % 4, 3);
    const ValueResult r = value_iteration(m, std::vector<double>(m.num_states(), 0.0),
                                          with_tol(1e-12));
    const std::vector<double> b = brute::minmax_over_pure_pairs(m);
    for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NEAR(r.J[i], b[i], 1e-8) << "seed " << seed;
  }
}
