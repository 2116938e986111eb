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

#include "sspg/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace sspg {

DecisionRule::DecisionRule(std::vector<double> probabilities) : probs_(std::move(probabilities)) {
  check_distribution(probs_, "decision rule");
}

DecisionRule DecisionRule::pure(std::size_t size, std::size_t index) {
  if (index >= size) throw std::out_of_range("pure decision rule index out of range");
  std::vector<double> p(size, 0.0);
  p[index] = 1.0;
  return DecisionRule(std::move(p));
}

DecisionRule DecisionRule::uniform(std::size_t size) {
  if (size == 0) throw std::invalid_argument("uniform decision rule over an empty set");
  return DecisionRule(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

std::optional<std::size_t> DecisionRule::pure_index() const {
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    if (probs_[k] == 1.0) return k;
  }
  return std::nullopt;
}

void check_distribution(std::span<const double> probs, std::string_view what) {
  if (probs.empty()) throw std::invalid_argument(std::string(what) + ": empty distribution");
  double total = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) {
      throw std::invalid_argument(std::string(what) + ": negative or non-finite probability");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    std::ostringstream os;
    os << what << ": probabilities sum to " << total;
    throw std::invalid_argument(os.str());
  }
}

StateId GameModel::add_state(std::string name, std::vector<std::string> controls1,
                             std::vector<std::string> controls2) {
  const StateId id = states_.size();
  const std::size_t begin = triplets_.size();
  block_offsets_.push_back(begin);
  for (std::size_t u = 0; u < controls1.size(); ++u) {
    for (std::size_t v = 0; v < controls2.size(); ++v) {
      triplets_.push_back(Triplet{id, u, v});
      rows_.emplace_back();
    }
  }
  states_.push_back(StateData{std::move(name), std::move(controls1), std::move(controls2)});
  return id;
}

void GameModel::set_outcomes(const Triplet& t, std::vector<Outcome> outcomes) {
  rows_.at(triplet_index(t)) = std::move(outcomes);
}

std::string GameModel::node_name(NodeId j) const {
  if (j == kTermination) return "0";
  return state_name(state_of(j));
}

std::optional<StateId> GameModel::find_state(std::string_view name) const {
  for (StateId i = 0; i < states_.size(); ++i) {
    if (states_[i].name == name) return i;
  }
  return std::nullopt;
}

const std::vector<std::string>& GameModel::controls(Player p, StateId i) const {
  const auto& s = states_.at(i);
  return p == Player::I ? s.controls1 : s.controls2;
}

std::optional<std::size_t> GameModel::find_control(Player p, StateId i,
                                                   std::string_view label) const {
  const auto& c = controls(p, i);
  auto it = std::find(c.begin(), c.end(), label);
  if (it == c.end()) return std::nullopt;
  return static_cast<std::size_t>(it - c.begin());
}

bool GameModel::contains(const Triplet& t) const {
  return t.state < states_.size() && t.u < states_[t.state].controls1.size() &&
         t.v < states_[t.state].controls2.size();
}

std::size_t GameModel::triplet_index(const Triplet& t) const {
  if (!contains(t)) throw std::out_of_range("unknown state-control triplet");
  return block_offsets_[t.state] + t.u * states_[t.state].controls2.size() + t.v;
}

std::size_t GameModel::block_size(StateId i) const {
  const auto& s = states_.at(i);
  return s.controls1.size() * s.controls2.size();
}

const std::vector<Outcome>& GameModel::outcomes(const Triplet& t) const {
  return rows_[triplet_index(t)];
}

std::string GameModel::describe(const Triplet& t) const {
  std::ostringstream os;
  os << '(' << state_name(t.state) << ',' << controls(Player::I, t.state).at(t.u) << ','
     << controls(Player::II, t.state).at(t.v) << ')';
  return os.str();
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < findings.size(); ++k) {
    if (k) os << "; ";
    os << findings[k].message;
  }
  return os.str();
}

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error("invalid game model: " + report.summary()), report_(std::move(report)) {}

ValidationReport validate_model(const GameModel& m) {
  ValidationReport report;
  auto add = [&](std::string msg, std::optional<Triplet> where = std::nullopt) {
    report.findings.push_back(Finding{std::move(msg), where});
  };

  for (StateId i = 0; i < m.num_states(); ++i) {
    const std::string& name = m.state_name(i);
    if (name == "0") add("state label \"0\" is reserved for termination");
    for (StateId k = 0; k < i; ++k) {
      if (m.state_name(k) == name) add("duplicate state label \"" + name + "\"");
    }
    if (m.num_controls(Player::I, i) == 0) add("empty control set U(" + name + ")");
    if (m.num_controls(Player::II, i) == 0) add("empty control set V(" + name + ")");
  }

  for (std::size_t idx = 0; idx < m.num_triplets(); ++idx) {
    const Triplet& t = m.triplet(idx);
    const auto& row = m.outcomes(idx);
    const std::string where = m.describe(t);
    if (row.empty()) {
      add("missing transition row at " + where, t);
      continue;
    }
    double mass = 0.0;
    std::vector<bool> seen(m.num_nodes(), false);
    for (const Outcome& o : row) {
      if (o.next >= m.num_nodes()) {
        add("unknown successor at " + where, t);
        continue;
      }
      if (seen[o.next]) add("duplicate successor " + m.node_name(o.next) + " at " + where, t);
      seen[o.next] = true;
      if (!std::isfinite(o.prob) || o.prob < 0.0) {
        add("negative or non-finite probability at " + where, t);
        continue;
      }
      if (o.prob == 0.0) {
        add("cost defined on zero-probability edge " + where + " -> " + m.node_name(o.next), t);
      }
      if (!std::isfinite(o.cost)) add("non-finite cost at " + where, t);
      mass += o.prob;
    }
    if (std::abs(mass - 1.0) > kProbabilityTolerance) {
      std::ostringstream os;
      os << "probability mass " << mass << " at " << where;
      add(os.str(), t);
    }
  }
  return report;
}

double expected_stage_cost(const GameModel& m, const Triplet& t) {
  double g = 0.0;
  for (const Outcome& o : m.outcomes(t)) g += o.prob * o.cost;
  return g;
}

std::vector<double> expected_stage_costs(const GameModel& m) {
  std::vector<double> g(m.num_triplets());
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    double s = 0.0;
    for (const Outcome& o : m.outcomes(idx)) s += o.prob * o.cost;
    g[idx] = s;
  }
  return g;
}

bool StationaryPolicy::is_pure() const {
  return std::all_of(rules.begin(), rules.end(),
                     [](const DecisionRule& r) { return r.pure_index().has_value(); });
}

StationaryPolicy pure_policy(const GameModel& m, Player p, std::span<const std::size_t> choice) {
  if (choice.size() != m.num_states()) {
    throw std::invalid_argument("pure policy needs one control per state");
  }
  StationaryPolicy policy{p, {}};
  policy.rules.reserve(choice.size());
  for (StateId i = 0; i < m.num_states(); ++i) {
    policy.rules.push_back(DecisionRule::pure(m.num_controls(p, i), choice[i]));
  }
  return policy;
}

StationaryPolicy uniform_policy(const GameModel& m, Player p) {
  StationaryPolicy policy{p, {}};
  for (StateId i = 0; i < m.num_states(); ++i) {
    policy.rules.push_back(DecisionRule::uniform(m.num_controls(p, i)));
  }
  return policy;
}

void check_policy(const GameModel& m, const StationaryPolicy& policy, Player expected) {
  if (policy.player != expected) {
    throw std::invalid_argument(expected == Player::I ? "expected a player-I policy"
                                                      : "expected a player-II policy");
  }
  if (policy.rules.size() != m.num_states()) {
    throw std::invalid_argument("policy/state mismatch: one decision rule per state required");
  }
  for (StateId i = 0; i < m.num_states(); ++i) {
    if (policy.rules[i].size() != m.num_controls(expected, i)) {
      throw std::invalid_argument("policy/state mismatch at state " + m.state_name(i));
    }
  }
}

GameModel swap_players(const GameModel& m) {
  GameModel out;
  for (StateId i = 0; i < m.num_states(); ++i) {
    out.add_state(m.state_name(i), m.controls(Player::II, i), m.controls(Player::I, i));
  }
  for (std::size_t idx = 0; idx < m.num_triplets(); ++idx) {
    const Triplet& t = m.triplet(idx);
    std::vector<Outcome> row = m.outcomes(idx);
    for (Outcome& o : row) o.cost = -o.cost;
    out.set_outcomes(Triplet{t.state, t.v, t.u}, std::move(row));
  }
  return out;
}

StationaryPolicy swap_players(const StationaryPolicy& policy) {
  return StationaryPolicy{opponent(policy.player), policy.rules};
}

GameModel transform_costs(const GameModel& m, double alpha, double beta) {
  GameModel out = m;
  for (std::size_t idx = 0; idx < m.num_triplets(); ++idx) {
    std::vector<Outcome> row = m.outcomes(idx);
    for (Outcome& o : row) o.cost = alpha * o.cost + beta;
    out.set_outcomes(m.triplet(idx), std::move(row));
  }
  return out;
}

}  // namespace sspg
