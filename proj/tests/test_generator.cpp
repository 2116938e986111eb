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

#include "fixtures.hpp"
#include "sspg/generator.hpp"
#include "sspg/io.hpp"
#include "sspg/structure.hpp"

using namespace sspg;

TEST(Generator, SameSeedSameModel) {
  for (Family f : {Family::Contraction, Family::Sequential}) {
    const GameModel a = fixtures::generated(f, 42, 5, 3);
    const GameModel b = fixtures::generated(f, 42, 5, 3);
    EXPECT_EQ(save_model(a), save_model(b));
    EXPECT_NE(save_model(a), save_model(fixtures::generated(f, 43, 5, 3)));
  }
}

TEST(Generator, FloorOneTerminatesEverywhere) {
  const GameModel m = fixtures::generated(Family::Contraction, 3, 4, 3, 1.0);
  for (std::size_t l = 0; l < m.num_triplets(); ++l) {
    ASSERT_EQ(m.outcomes(l).size(), 1u);
    EXPECT_EQ(m.outcomes(l)[0].next, kTermination);
    EXPECT_EQ(m.outcomes(l)[0].prob, 1.0);
  }
}

TEST(Generator, FloorIsRespected) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const GameModel m = fixtures::generated(Family::Contraction, seed, 4, 3, 0.25, -2.0, 5.0);
    EXPECT_TRUE(validate_model(m).ok());
    for (std::size_t l = 0; l < m.num_triplets(); ++l) {
      double p0 = 0.0;
      for (const Outcome& o : m.outcomes(l)) {
        if (o.next == kTermination) p0 += o.prob;
        EXPECT_GE(o.cost, -2.0);
        EXPECT_LE(o.cost, 5.0);
      }
      EXPECT_GE(p0, 0.25 - 1e-12);
    }
  }
}

TEST(Generator, SequentialHasOneMoverPerState) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const GameModel m = fixtures::generated(Family::Sequential, seed, 5, 4);
    for (StateId i = 0; i < m.num_states(); ++i) {
      EXPECT_TRUE(m.num_controls(Player::I, i) == 1 || m.num_controls(Player::II, i) == 1);
    }
  }
}

TEST(Generator, LoopyNeedsPositiveCosts) {
  GeneratorConfig cfg;
  cfg.family = Family::Loopy;
  EXPECT_THROW(generate_model(cfg), std::invalid_argument);
  cfg.cost_lo = 0.5;
  cfg.cost_hi = 1.5;
  const GameModel m = generate_model(cfg);
  EXPECT_TRUE(validate_model(m).ok());
  // The first row control always keeps the floor, so it is a proper policy.
  const StationaryPolicy first =
      pure_policy(m, Player::I, std::vector<std::size_t>(m.num_states(), 0));
  for (bool b : forall_termination(m, first)) EXPECT_TRUE(b);
  cfg.termination_floor = 0.0;
  EXPECT_THROW(generate_model(cfg), std::invalid_argument);
}

TEST(Generator, ConfigValidation) {
  GeneratorConfig cfg;
  cfg.n_states = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = GeneratorConfig{};
  cfg.termination_floor = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = GeneratorConfig{};
  cfg.cost_lo = 2.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Generator, FamilyNames) {
  for (Family f : {Family::Contraction, Family::Loopy, Family::Sequential}) {
    EXPECT_EQ(family_from_string(to_string(f)), f);
  }
  EXPECT_THROW(family_from_string("spiral"), std::invalid_argument);
}
