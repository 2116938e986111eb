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

#include "sspg/operators.hpp"

#include <algorithm>
#include <cmath>

namespace sspg {
namespace {

double continuation(const GameModel& m, std::size_t idx, std::span<const double> J) {
  double s = 0.0;
  for (const Outcome& o : m.outcomes(idx)) {
    if (o.next != kTermination) s += o.prob * J[state_of(o.next)];
  }
  return s;
}

void check_value_vector(const GameModel& m, std::span<const double> J) {
  if (J.size() != m.num_states()) {
    throw std::invalid_argument("value vector size does not match the number of states");
  }
}

void check_q(const GameModel& m, std::span<const double> q) {
  if (q.size() != m.num_triplets()) {
    throw std::invalid_argument("Q-table size does not match the number of triplets");
  }
}

// Row u of the stage matrix averaged by μ(·|i), then maximized over columns;
// the optimum of a linear function over a simplex sits at a vertex.
double best_response_at(const MatrixGame& a, const StationaryPolicy& policy, StateId i) {
  const Side side = policy.player == Player::I ? Side::Row : Side::Col;
  return best_response_value(a, policy[i].probabilities(), side).value;
}

}  // namespace

double sup_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s = std::max(s, std::abs(v));
  return s;
}

double sup_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("sup_distance: size mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s = std::max(s, std::abs(x[k] - y[k]));
  return s;
}

MatrixGame stage_matrix(const GameModel& m, std::span<const double> J, StateId i) {
  check_value_vector(m, J);
  const std::size_t rows = m.num_controls(Player::I, i);
  const std::size_t cols = m.num_controls(Player::II, i);
  const std::size_t begin = m.block_begin(i);
  std::vector<double> a(rows * cols);
  for (std::size_t k = 0; k < a.size(); ++k) {
    double g = 0.0;
    for (const Outcome& o : m.outcomes(begin + k)) g += o.prob * o.cost;
    a[k] = g + continuation(m, begin + k, J);
  }
  return MatrixGame(rows, cols, std::move(a));
}

MatrixGame q_matrix(const GameModel& m, std::span<const double> q, StateId i) {
  check_q(m, q);
  const std::size_t rows = m.num_controls(Player::I, i);
  const std::size_t cols = m.num_controls(Player::II, i);
  const auto block = q.subspan(m.block_begin(i), rows * cols);
  return MatrixGame(rows, cols, std::vector<double>(block.begin(), block.end()));
}

double successor_value(const GameModel& m, std::span<const double> q, NodeId j) {
  if (j == kTermination) return 0.0;
  const StateId s = state_of(j);
  const std::size_t rows = m.num_controls(Player::I, s);
  const std::size_t cols = m.num_controls(Player::II, s);
  const auto block = q.subspan(m.block_begin(s), rows * cols);
  // Sequential-move states need no LP.
  if (rows == 1) return *std::max_element(block.begin(), block.end());
  if (cols == 1) return *std::min_element(block.begin(), block.end());
  return matrix_game_value(MatrixGame(rows, cols, std::vector<double>(block.begin(), block.end())));
}

ValueVector apply_T(const GameModel& m, std::span<const double> J) {
  ValueVector out(m.num_states());
  for (StateId i = 0; i < m.num_states(); ++i) out[i] = matrix_game_value(stage_matrix(m, J, i));
  return out;
}

ValueVector apply_T_tilde(const GameModel& m, std::span<const double> J) {
  ValueVector out(m.num_states());
  for (StateId i = 0; i < m.num_states(); ++i) {
    out[i] = -matrix_game_value(stage_matrix(m, J, i).transposed_negated());
  }
  return out;
}

ValueVector apply_T_mu(const GameModel& m, const StationaryPolicy& mu, std::span<const double> J) {
  check_policy(m, mu, Player::I);
  ValueVector out(m.num_states());
  for (StateId i = 0; i < m.num_states(); ++i) {
    out[i] = best_response_at(stage_matrix(m, J, i), mu, i);
  }
  return out;
}

ValueVector apply_T_nu(const GameModel& m, const StationaryPolicy& nu, std::span<const double> J) {
  check_policy(m, nu, Player::II);
  ValueVector out(m.num_states());
  for (StateId i = 0; i < m.num_states(); ++i) {
    out[i] = best_response_at(stage_matrix(m, J, i), nu, i);
  }
  return out;
}

ValueVector apply_T_munu(const GameModel& m, const StationaryPolicy& mu,
                         const StationaryPolicy& nu, std::span<const double> J) {
  check_policy(m, mu, Player::I);
  check_policy(m, nu, Player::II);
  check_value_vector(m, J);
  ValueVector out(m.num_states(), 0.0);
  for (std::size_t idx = 0; idx < m.num_triplets(); ++idx) {
    const Triplet& t = m.triplet(idx);
    const double w = mu[t.state][t.u] * nu[t.state][t.v];
    if (w == 0.0) continue;
    double g = 0.0;
    for (const Outcome& o : m.outcomes(idx)) g += o.prob * o.cost;
    out[t.state] += w * (g + continuation(m, idx, J));
  }
  return out;
}

QTable apply_F(const GameModel& m, const QTable& Q) {
  check_q(m, Q.values());
  std::vector<double> vals(m.num_nodes(), 0.0);
  for (NodeId j = 1; j < m.num_nodes(); ++j) vals[j] = successor_value(m, Q.values(), j);
  QTable out(m);
  for (std::size_t idx = 0; idx < m.num_triplets(); ++idx) {
    double s = 0.0;
    for (const Outcome& o : m.outcomes(idx)) s += o.prob * (o.cost + vals[o.next]);
    out[idx] = s;
  }
  return out;
}

QTable q_from_j(const GameModel& m, std::span<const double> J) {
  check_value_vector(m, J);
  QTable out(m);
  for (std::size_t idx = 0; idx < m.num_triplets(); ++idx) {
    double g = 0.0;
    for (const Outcome& o : m.outcomes(idx)) g += o.prob * o.cost;
    out[idx] = g + continuation(m, idx, J);
  }
  return out;
}

ValueVector j_from_q(const GameModel& m, const QTable& Q) {
  ValueVector out(m.num_states());
  for (StateId i = 0; i < m.num_states(); ++i) {
    out[i] = successor_value(m, Q.values(), node_of(i));
  }
  return out;
}

PolicyPair greedy_policies(const GameModel& m, const QTable& Q) {
  PolicyPair pair{StationaryPolicy{Player::I, {}}, StationaryPolicy{Player::II, {}}};
  for (StateId i = 0; i < m.num_states(); ++i) {
    MatrixGameSolution sol = solve_matrix_game(q_matrix(m, Q.values(), i));
    pair.mu.rules.push_back(std::move(sol.row_strategy));
    pair.nu.rules.push_back(std::move(sol.col_strategy));
  }
  return pair;
}

}  // namespace sspg
