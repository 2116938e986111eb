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

#pragma once

#include <random>
#include <string>
#include <vector>

#include "sspg/generator.hpp"
#include "sspg/model.hpp"
#include "sspg/operators.hpp"

namespace fixtures {

using sspg::GameModel;
using sspg::Outcome;
using sspg::Triplet;

/// State 1, controls {1,2} each; u=v ends with cost 1, (1,2) ends with cost
/// 0, (2,1) loops at cost 0.
inline GameModel everett() {
  GameModel m;
  m.add_state("1", {"1", "2"}, {"1", "2"});
  m.set_outcomes(Triplet{0, 0, 0}, {Outcome{0, 1.0, 1.0}});
  m.set_outcomes(Triplet{0, 0, 1}, {Outcome{0, 1.0, 0.0}});
  m.set_outcomes(Triplet{0, 1, 0}, {Outcome{1, 1.0, 0.0}});
  m.set_outcomes(Triplet{0, 1, 1}, {Outcome{0, 1.0, 1.0}});
  return m;
}

/// All costs zero; only (2,2) keeps the game at state 1.
inline GameModel zero_cost() {
  GameModel m;
  m.add_state("1", {"1", "2"}, {"1", "2"});
  m.set_outcomes(Triplet{0, 0, 0}, {Outcome{0, 1.0, 0.0}});
  m.set_outcomes(Triplet{0, 0, 1}, {Outcome{0, 1.0, 0.0}});
  m.set_outcomes(Triplet{0, 1, 0}, {Outcome{0, 1.0, 0.0}});
  m.set_outcomes(Triplet{0, 1, 1}, {Outcome{1, 1.0, 0.0}});
  return m;
}

/// One state, one control each, half to 0 and half back, cost 1.
inline GameModel self_loop(double g = 1.0, double stay = 0.5) {
  GameModel m;
  m.add_state("1", {"a"}, {"x"});
  m.set_outcomes(Triplet{0, 0, 0}, {Outcome{0, 1.0 - stay, g}, Outcome{1, stay, g}});
  return m;
}

/// One state with a single pair that loops forever at cost g.
inline GameModel trap(double g) {
  GameModel m;
  m.add_state("1", {"a"}, {"x"});
  m.set_outcomes(Triplet{0, 0, 0}, {Outcome{1, 1.0, g}});
  return m;
}

/// Every triplet ends the game; the stage costs are the given matrices.
inline GameModel terminal_only(const std::vector<std::vector<std::vector<double>>>& costs) {
  GameModel m;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    std::vector<std::string> u, v;
    for (std::size_t r = 0; r < costs[i].size(); ++r) u.push_back("u" + std::to_string(r + 1));
    for (std::size_t c = 0; c < costs[i][0].size(); ++c) v.push_back("v" + std::to_string(c + 1));
    m.add_state(std::to_string(i + 1), u, v);
  }
  for (std::size_t i = 0; i < costs.size(); ++i) {
    for (std::size_t r = 0; r < costs[i].size(); ++r) {
      for (std::size_t c = 0; c < costs[i][r].size(); ++c) {
        m.set_outcomes(Triplet{i, r, c}, {Outcome{0, 1.0, costs[i][r][c]}});
      }
    }
  }
  return m;
}

/// State 1 splits between 0 and state 2; state 2 always ends the game.
inline GameModel two_successor() {
  GameModel m;
  m.add_state("1", {"a", "b"}, {"x"});
  m.add_state("2", {"a"}, {"x", "y"});
  m.set_outcomes(Triplet{0, 0, 0}, {Outcome{0, 0.3, 1.0}, Outcome{2, 0.7, 3.0}});
  m.set_outcomes(Triplet{0, 1, 0}, {Outcome{0, 0.5, -1.0}, Outcome{2, 0.5, 1.0}});
  m.set_outcomes(Triplet{1, 0, 0}, {Outcome{0, 1.0, 4.0}});
  m.set_outcomes(Triplet{1, 0, 1}, {Outcome{0, 1.0, -2.0}});
  return m;
}

inline GameModel generated(sspg::Family family, std::uint64_t seed, std::size_t states,
                           std::size_t controls, double floor = 0.1, double lo = -1.0,
                           double hi = 1.0) {
  sspg::GeneratorConfig cfg;
  cfg.family = family;
  cfg.seed = seed;
  cfg.n_states = states;
  cfg.max_controls = controls;
  cfg.termination_floor = floor;
  cfg.cost_lo = lo;
  cfg.cost_hi = hi;
  return sspg::generate_model(cfg);
}

/// Random stationary policy with random supports.
inline sspg::StationaryPolicy random_policy(const GameModel& m, sspg::Player p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  sspg::StationaryPolicy pol{p, {}};
  for (sspg::StateId i = 0; i < m.num_states(); ++i) {
    std::vector<double> w(m.num_controls(p, i));
    double total = 0.0;
    for (double& x : w) {
      x = unit(rng) < 0.3 ? 0.0 : unit(rng);
      total += x;
    }
    if (total == 0.0) {
      w[0] = 1.0;
      total = 1.0;
    }
    for (double& x : w) x /= total;
    pol.rules.emplace_back(std::move(w));
  }
  return pol;
}

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double lo = -10.0,
                                         double hi = 10.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> x(n);
  for (double& v : x) v = d(rng);
  return x;
}

}  // namespace fixtures
