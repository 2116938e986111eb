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
#include <iosfwd>
#include <optional>
#include <stop_token>
#include <string>
#include <vector>

#include "sspg/chain.hpp"
#include "sspg/model.hpp"
#include "sspg/operators.hpp"

namespace sspg {

enum class SolveStatus { Converged, IterationCap, Diverging, Cancelled };

std::string to_string(SolveStatus s);

struct TraceRow {
  std::size_t iteration = 0;
  double residual = 0.0;
  std::optional<double> distance_to_ref;
};

struct SolveTrace {
  std::vector<TraceRow> rows;
  SolveStatus status = SolveStatus::IterationCap;
  /// Policy iteration only: index of the policy whose evaluation failed.
  std::optional<std::size_t> offending_policy;

  double final_residual() const { return rows.empty() ? 0.0 : rows.back().residual; }
};

/// Writes "iteration,residual,distance_to_ref" rows.
void write_trace_csv(std::ostream& os, const SolveTrace& trace);

struct SolveOptions {
  double tol = 1e-8;
  std::size_t max_iter = 100000;
  /// Iterates whose sup-norm exceeds this are declared diverging.
  double divergence_bound = 1e9;
  /// Optional point to measure ‖x_t − ref‖_∞ against.
  std::optional<std::vector<double>> reference;
  /// Keep every iterate x_0, x_1, ... in the result.
  bool record_iterates = false;
  std::stop_token stop;
};

struct ValueResult {
  ValueVector J;
  SolveTrace trace;
  std::vector<ValueVector> iterates;
};

struct QValueResult {
  QTable Q;
  SolveTrace trace;
};

/// J_{t+1} = T J_t until ‖J_{t+1} − J_t‖_∞ ≤ tol. Returns the last iterate.
ValueResult value_iteration(const GameModel& m, const ValueVector& J0, const SolveOptions& opts);

/// Q_{t+1} = F Q_t with the same stopping rule.
QValueResult q_value_iteration(const GameModel& m, const QTable& Q0, const SolveOptions& opts);

/// Total cost of a stationary pair from every state.
struct PairEvaluation {
  /// Finite totals, or ±infinity.
  ValueVector values;
  std::vector<bool> reaches_termination;
  bool prolonging = false;
  /// Some recurrent class other than {0} has zero gain. Those states get the
  /// Cesàro total, which is finite; the pair violates the model assumption.
  bool zero_gain_prolonging = false;
  std::vector<RecurrentClass> classes;

  bool all_finite() const;
  bool any_plus_infinity() const;
  bool any_minus_infinity() const;
};

PairEvaluation evaluate_pair(const GameModel& m, const StationaryPolicy& mu,
                             const StationaryPolicy& nu);

/// Fixed point of T_μ (policy of player I; the opponent maximizes) or of
/// T̃_ν (policy of player II; the opponent minimizes), by value iteration
/// from `start` (zero when empty).
ValueResult evaluate_vs_best_response(const GameModel& m, const StationaryPolicy& policy,
                                      const SolveOptions& opts, const ValueVector& start = {});

struct PolicyIterationResult {
  ValueVector x;
  /// μ_0, μ_1, ...: one entry per evaluated policy.
  std::vector<StationaryPolicy> policies;
  /// x_0, x_1, ...: the evaluation of each policy.
  std::vector<ValueVector> values;
  SolveTrace trace;
  /// Set when the start policy could not be confirmed essentially proper.
  std::optional<std::string> warning;
};

struct PolicyIterationOptions {
  double tol = 1e-8;
  std::size_t max_outer = 100;
  double inner_tol = 1e-12;
  std::size_t inner_max_iter = 100000;
  bool check_start = true;
  std::stop_token stop;
};

/// Alternates x_t = fixed point of T_{μ_t} with the improvement
/// T_{μ_{t+1}} x_t = T x_t until ‖x_t − T x_t‖_∞ ≤ tol. Player II runs on the
/// swapped game and is mapped back.
PolicyIterationResult policy_iteration(const GameModel& m, const StationaryPolicy& start,
                                       const PolicyIterationOptions& opts);

}  // namespace sspg
