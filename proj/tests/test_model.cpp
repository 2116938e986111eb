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

#include "fixtures.hpp"
#include "sspg/model.hpp"
#include "sspg/random_stream.hpp"

using namespace sspg;

TEST(Model, EverettIsValid) {
  const GameModel m = fixtures::everett();
  EXPECT_TRUE(validate_model(m).ok());
  EXPECT_EQ(m.num_states(), 1u);
  EXPECT_EQ(m.num_controls(Player::I, 0), 2u);
  EXPECT_EQ(m.num_controls(Player::II, 0), 2u);
  EXPECT_EQ(m.num_triplets(), 4u);
}

TEST(Model, TripletOrderIsStateThenUThenV) {
  GameModel m;
  m.add_state("1", {"a", "b"}, {"x", "y", "z"});
  m.add_state("2", {"a"}, {"x", "y"});
  EXPECT_EQ(m.block_begin(1), 6u);
  EXPECT_EQ(m.triplet_index(Triplet{0, 1, 2}), 5u);
  EXPECT_EQ(m.triplet_index(Triplet{1, 0, 1}), 7u);
  EXPECT_EQ(m.triplet(4), (Triplet{0, 1, 1}));
  EXPECT_THROW(m.triplet_index(Triplet{0, 2, 0}), std::out_of_range);
}

TEST(Model, ShortMassIsReported) {
  GameModel m;
  m.add_state("1", {"a"}, {"x"});
  m.set_outcomes(Triplet{0, 0, 0}, {Outcome{0, 0.9, 1.0}});
  const ValidationReport r = validate_model(m);
  ASSERT_EQ(r.findings.size(), 1u);
  EXPECT_NE(r.findings[0].message.find("probability mass 0.9 at (1,a,x)"), std::string::npos);
  ASSERT_TRUE(r.findings[0].where.has_value());
}

TEST(Model, EmptyControlSetIsReported) {
  GameModel m;
  m.add_state("1", {}, {"x"});
  const ValidationReport r = validate_model(m);
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.summary().find("empty control set"), std::string::npos);
}

TEST(Model, CostOnZeroProbabilityEdgeIsRejected) {
  GameModel m;
  m.add_state("1", {"a"}, {"x"});
  m.set_outcomes(Triplet{0, 0, 0}, {Outcome{0, 1.0, 1.0}, Outcome{1, 0.0, 5.0}});
  EXPECT_NE(validate_model(m).summary().find("zero-probability edge"), std::string::npos);
}

TEST(Model, MissingRowIsNamed) {
  GameModel m;
  m.add_state("1", {"a", "b"}, {"x"});
  m.set_outcomes(Triplet{0, 0, 0}, {Outcome{0, 1.0, 0.0}});
  EXPECT_NE(validate_model(m).summary().find("(1,b,x)"), std::string::npos);
}

TEST(Model, ExpectedStageCost) {
  GameModel m;
  m.add_state("1", {"a"}, {"x"});
  m.set_outcomes(Triplet{0, 0, 0}, {Outcome{0, 0.5, 2.0}, Outcome{1, 0.5, 0.0}});
  EXPECT_DOUBLE_EQ(expected_stage_cost(m, Triplet{0, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(expected_stage_cost(fixtures::terminal_only({{{1.0}}}), Triplet{0, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(expected_stage_cost(fixtures::everett(), Triplet{0, 0, 1}), 0.0);
  EXPECT_THROW(expected_stage_cost(m, Triplet{0, 1, 0}), std::out_of_range);
}

TEST(Model, StageCostIsLinearInCosts) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GameModel m = fixtures::generated(Family::Contraction, seed, 3, 3);
    const GameModel scaled = transform_costs(m, -2.5, 0.0);
    const auto g = expected_stage_costs(m);
    const auto gs = expected_stage_costs(scaled);
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(gs[k], -2.5 * g[k], 1e-12);
  }
}

TEST(Model, GeneratedRowsSumToOne) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const GameModel m = fixtures::generated(Family::Loopy, seed, 4, 3, 0.2, 0.1, 2.0);
    ASSERT_TRUE(validate_model(m).ok()) << validate_model(m).summary();
    for (std::size_t idx = 0; idx < m.num_triplets(); ++idx) {
      double s = 0.0;
      for (const Outcome& o : m.outcomes(idx)) {
        EXPECT_GE(o.prob, 0.0);
        s += o.prob;
      }
      EXPECT_NEAR(s, 1.0, 1e-9);
    }
  }
}

TEST(Model, DecisionRuleRejectsBadMass) {
  EXPECT_THROW(DecisionRule({0.5, 0.4}), std::invalid_argument);
  EXPECT_THROW(DecisionRule({1.5, -0.5}), std::invalid_argument);
  EXPECT_EQ(DecisionRule::pure(3, 1).pure_index(), std::optional<std::size_t>(1));
  EXPECT_FALSE(DecisionRule::uniform(2).pure_index().has_value());
}

TEST(Model, CheckPolicyRejectsWrongPlayer) {
  const GameModel m = fixtures::everett();
  EXPECT_THROW(check_policy(m, uniform_policy(m, Player::I), Player::II), std::invalid_argument);
  EXPECT_NO_THROW(check_policy(m, uniform_policy(m, Player::II), Player::II));
}

TEST(Model, SwapPlayersIsAnInvolution) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const GameModel m = fixtures::generated(Family::Contraction, seed, 3, 3);
    EXPECT_EQ(swap_players(swap_players(m)), m);
  }
}

TEST(RandomStream, SameFieldsSameOutput) {
  RandomStream a(7, 3, 11), b(7, 3, 11);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(a.next_u64(), b.next_u64());
  EXPECT_EQ(RandomStream::at(7, 3, 11), RandomStream(7, 3, 11).next_u64());
  EXPECT_NE(RandomStream::at(7, 3, 11), RandomStream::at(7, 4, 11));
  EXPECT_NE(RandomStream::at(7, 3, 11), RandomStream::at(8, 3, 11));
}

TEST(RandomStream, NextBelowStaysInRange) {
  RandomStream s(1, 1);
  for (int k = 0; k < 10000; ++k) EXPECT_LT(s.next_below(7), 7u);
}

TEST(SampleTransition, TerminalRowAlwaysEnds) {
  const GameModel m = fixtures::terminal_only({{{3.0}}});
  RandomStream s(5, 0);
  for (int k = 0; k < 1000; ++k) {
    const TransitionSample t = sample_transition(m, 0, s);
    EXPECT_EQ(t.next, kTermination);
    EXPECT_EQ(t.cost, 3.0);
    s = t.stream;
  }
}

TEST(SampleTransition, SameStreamSameSample) {
  const GameModel m = fixtures::self_loop();
  const RandomStream s(9, 2, 40);
  const TransitionSample a = sample_transition(m, 0, s);
  const TransitionSample b = sample_transition(m, 0, s);
  EXPECT_EQ(a.next, b.next);
  EXPECT_EQ(a.cost, b.cost);
  EXPECT_EQ(a.stream, b.stream);
  EXPECT_EQ(a.stream.counter(), 41u);
}

TEST(SampleTransition, EquiprobableSuccessorsAreBalanced) {
  const GameModel m = fixtures::self_loop();
  RandomStream s(1, 0);
  std::size_t stays = 0;
  const std::size_t n = 100000;
  for (std::size_t k = 0; k < n; ++k) {
    const TransitionSample t = sample_transition(m, 0, s);
    stays += t.next == 1;
    s = t.stream;
  }
  EXPECT_NEAR(static_cast<double>(stays) / n, 0.5, 0.01);
}

TEST(SampleTransition, ChiSquaredAgainstKernel) {
  // Five successors, 10^5 draws; the 0.999 quantile of chi-squared with 4
  // degrees of freedom is 18.467.
  GameModel m;
  for (int i = 1; i <= 4; ++i) m.add_state(std::to_string(i), {"a"}, {"x"});
  const std::vector<double> p{0.1, 0.15, 0.2, 0.25, 0.3};
  std::vector<Outcome> row;
  for (NodeId j = 0; j < 5; ++j) row.push_back(Outcome{j, p[j], 0.0});
  for (StateId i = 0; i < 4; ++i) {
    m.set_outcomes(Triplet{i, 0, 0}, i == 0 ? row : std::vector<Outcome>{Outcome{0, 1.0, 0.0}});
  }
  ASSERT_TRUE(validate_model(m).ok());
  std::vector<double> counts(5, 0.0);
  RandomStream s(1, 0);
  const double n = 100000;
  for (int k = 0; k < n; ++k) {
    const TransitionSample t = sample_transition(m, 0, s);
    counts[t.next] += 1;
    s = t.stream;
  }
  double chi2 = 0.0;
  for (std::size_t j = 0; j < 5; ++j) {
    const double e = n * p[j];
    chi2 += (counts[j] - e) * (counts[j] - e) / e;
  }
  EXPECT_LT(chi2, 18.467);
}
