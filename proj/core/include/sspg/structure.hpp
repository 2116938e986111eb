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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sspg/chain.hpp"
#include "sspg/model.hpp"
#include "sspg/solve.hpp"

namespace sspg {

/// Holds / Violated read as yes / no for the properness checks.
enum class Verdict { Holds, Violated, Inconclusive };

std::string to_string(Verdict v);

/// Enumeration budget shared by every exhaustive check.
inline constexpr std::size_t kEnumerationCap = 1'000'000;

/// Number of pure stationary policies of player p, or nullopt above `cap`.
std::optional<std::size_t> pure_policy_count(const GameModel& m, Player p,
                                             std::size_t cap = kEnumerationCap);

/// The k-th pure policy in mixed-radix order (state 0 varies fastest).
StationaryPolicy nth_pure_policy(const GameModel& m, Player p, std::size_t k);

/// Per state: termination w.p.1 against every stationary opponent policy.
std::vector<bool> forall_termination(const GameModel& m, const StationaryPolicy& fixed);

/// Per state: termination w.p.1 against some stationary opponent policy.
std::vector<bool> exists_termination(const GameModel& m, const StationaryPolicy& fixed);

struct ProperCheck {
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
  /// Opponent policy demonstrating a failure.
  std::optional<StationaryPolicy> witness;
  std::optional<StateId> witness_state;
};

/// Essential properness of a stationary policy of either player, decided
/// over pure opponent responses.
ProperCheck is_essentially_proper(const GameModel& m, const StationaryPolicy& policy);

struct ClauseResult {
  Verdict verdict = Verdict::Inconclusive;
  std::string note;
  std::optional<StationaryPolicy> witness;
};

struct PairWitness {
  StationaryPolicy mu;
  StationaryPolicy nu;
  PairEvaluation evaluation;
  std::string description;
};

struct AssumptionReport {
  ClauseResult safeguard_player1;  ///< clause (i)
  ClauseResult safeguard_player2;  ///< clause (ii)
  ClauseResult prolonging_pairs;   ///< clause (iii)
  std::vector<PairWitness> witnesses;
  /// The clause (iii) pass was established over pure pairs only.
  bool pure_policy_caveat = false;
  std::size_t pairs_examined = 0;

  Verdict overall() const;
};

/// Exhaustive over pure policy pairs; inconclusive above kEnumerationCap.
AssumptionReport check_ssp_game_assumption(const GameModel& m);

/// The single-player problem seen by player I while player II plays ν̄, on the
/// state space S_o ∪ R. States 0..n−1 are S; state n + ℓ is triplet ℓ.
struct SspA {
  std::size_t num_states = 0;   ///< n
  std::size_t num_triplets = 0; ///< |R|
  /// Controls of S-state i (player I's labels); R-states have one control.
  std::vector<std::vector<std::string>> controls;
  /// rows[state][control]: successors over S ∪ {0} with probabilities, and
  /// the expected stage cost.
  struct Row {
    std::vector<std::pair<NodeId, double>> next;
    double cost = 0.0;
  };
  std::vector<std::vector<Row>> rows;
  std::vector<std::string> names;

  std::size_t size() const { return num_states + num_triplets; }
};

SspA build_sspa(const GameModel& m, const StationaryPolicy& nu_bar);

struct SingleCheck {
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
  /// Control index per S-state of the failing policy.
  std::optional<std::vector<std::size_t>> witness;
};

/// Proper pure policy exists, and every improper pure policy has a state of
/// infinite cost.
SingleCheck check_single_player_ssp(const SspA& sspa);

}  // namespace sspg
