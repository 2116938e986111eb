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

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sspg {

/// Index of a non-terminal state, 0-based in model order.
using StateId = std::size_t;

/// Index into S ∪ {0}: 0 is the termination state, state s lives at s + 1.
using NodeId = std::size_t;

inline constexpr NodeId kTermination = 0;

constexpr NodeId node_of(StateId s) { return s + 1; }
constexpr StateId state_of(NodeId j) { return j - 1; }

/// Tolerance on probability mass used throughout validation.
inline constexpr double kProbabilityTolerance = 1e-9;

enum class Player { I, II };

constexpr Player opponent(Player p) { return p == Player::I ? Player::II : Player::I; }

/// One successor of a state-control triplet: destination, probability, cost.
struct Outcome {
  NodeId next = kTermination;
  double prob = 0.0;
  double cost = 0.0;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// A state together with one control index per player.
struct Triplet {
  StateId state = 0;
  std::size_t u = 0;
  std::size_t v = 0;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Probability distribution over one player's controls at one state.
class DecisionRule {
 public:
  DecisionRule() = default;
  explicit DecisionRule(std::vector<double> probabilities);

  static DecisionRule pure(std::size_t size, std::size_t index);
  static DecisionRule uniform(std::size_t size);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t k) const { return probs_[k]; }
  std::span<const double> probabilities() const { return probs_; }

  /// Index of the single control with mass 1, if the rule is deterministic.
  std::optional<std::size_t> pure_index() const;

  friend bool operator==(const DecisionRule&, const DecisionRule&) = default;

 private:
  std::vector<double> probs_;
};

/// Throws std::invalid_argument unless the values form a distribution
/// within kProbabilityTolerance.
void check_distribution(std::span<const double> probs, std::string_view what);

/// Finite two-player zero-sum SSP game. Player I minimizes.
///
/// The termination state is implicit. Triplets are numbered block by block:
/// state order first, then u, then v.
class GameModel {
 public:
  StateId add_state(std::string name, std::vector<std::string> controls1,
                    std::vector<std::string> controls2);

  /// Replaces the successor list of triplet (i, u, v).
  void set_outcomes(const Triplet& t, std::vector<Outcome> outcomes);

  std::size_t num_states() const { return states_.size(); }
  std::size_t num_nodes() const { return states_.size() + 1; }
  const std::string& state_name(StateId i) const { return states_.at(i).name; }
  std::string node_name(NodeId j) const;
  std::optional<StateId> find_state(std::string_view name) const;

  const std::vector<std::string>& controls(Player p, StateId i) const;
  std::size_t num_controls(Player p, StateId i) const { return controls(p, i).size(); }
  std::optional<std::size_t> find_control(Player p, StateId i, std::string_view label) const;

  std::size_t num_triplets() const { return triplets_.size(); }
  bool contains(const Triplet& t) const;
  /// Throws std::out_of_range for a triplet outside R.
  std::size_t triplet_index(const Triplet& t) const;
  const Triplet& triplet(std::size_t index) const { return triplets_.at(index); }
  /// First triplet index of state i; the block has |U(i)|·|V(i)| entries.
  std::size_t block_begin(StateId i) const { return block_offsets_.at(i); }
  std::size_t block_size(StateId i) const;

  const std::vector<Outcome>& outcomes(const Triplet& t) const;
  const std::vector<Outcome>& outcomes(std::size_t triplet_index) const {
    return rows_.at(triplet_index);
  }

  std::string describe(const Triplet& t) const;

  friend bool operator==(const GameModel&, const GameModel&) = default;

 private:
  struct StateData {
    std::string name;
    std::vector<std::string> controls1;
    std::vector<std::string> controls2;

    friend bool operator==(const StateData&, const StateData&) = default;
  };

  std::vector<StateData> states_;
  std::vector<std::size_t> block_offsets_;
  std::vector<Triplet> triplets_;
  std::vector<std::vector<Outcome>> rows_;
};

struct Finding {
  std::string message;
  std::optional<Triplet> where;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool ok() const { return findings.empty(); }
  std::string summary() const;
};

ValidationReport validate_model(const GameModel& m);

/// Thrown by loaders when a model parses but fails validation.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// g(i,u,v) = Σ_j p_ij(u,v) ĝ(i,u,v,j).
double expected_stage_cost(const GameModel& m, const Triplet& t);
/// Expected stage costs for every triplet in index order.
std::vector<double> expected_stage_costs(const GameModel& m);

/// Map from states to decision rules for one player.
struct StationaryPolicy {
  Player player = Player::I;
  std::vector<DecisionRule> rules;

  const DecisionRule& operator[](StateId i) const { return rules.at(i); }
  bool is_pure() const;

  friend bool operator==(const StationaryPolicy&, const StationaryPolicy&) = default;
};

StationaryPolicy pure_policy(const GameModel& m, Player p, std::span<const std::size_t> choice);
StationaryPolicy uniform_policy(const GameModel& m, Player p);
/// Throws std::invalid_argument if the policy does not fit the model or
/// belongs to the other player.
void check_policy(const GameModel& m, const StationaryPolicy& policy, Player expected);

/// The same game seen from the other side: controls swapped and costs
/// negated, so player II of `m` becomes the minimizer.
GameModel swap_players(const GameModel& m);
StationaryPolicy swap_players(const StationaryPolicy& policy);

/// Scales and shifts every transition cost: ĝ ← alpha·ĝ + beta.
GameModel transform_costs(const GameModel& m, double alpha, double beta);

}  // namespace sspg
