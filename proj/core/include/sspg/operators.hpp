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

#include <span>
#include <vector>

#include "sspg/matgame.hpp"
#include "sspg/model.hpp"

namespace sspg {

/// J or x: one entry per non-terminal state; the termination state is 0.
using ValueVector = std::vector<double>;

/// Q-factors indexed by triplet. The termination entry Q(0,0,0) is pinned to
/// zero and never stored.
class QTable {
 public:
  QTable() = default;
  explicit QTable(const GameModel& m, double fill = 0.0) : values_(m.num_triplets(), fill) {}
  explicit QTable(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t ell) const { return values_[ell]; }
  double& operator[](std::size_t ell) { return values_[ell]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  std::vector<double> values_;
};

double sup_norm(std::span<const double> x);
double sup_distance(std::span<const double> x, std::span<const double> y);

/// A_i[u][v] = g(i,u,v) + Σ_j p_ij(u,v) J(j).
MatrixGame stage_matrix(const GameModel& m, std::span<const double> J, StateId i);
/// Q restricted to state i as a |U(i)|×|V(i)| matrix game.
MatrixGame q_matrix(const GameModel& m, std::span<const double> q, StateId i);

/// Value of Q restricted to successor j; 0 at termination.
double successor_value(const GameModel& m, std::span<const double> q, NodeId j);

/// (TJ)(i): minimax value of the stage matrix.
ValueVector apply_T(const GameModel& m, std::span<const double> J);
/// (T̃J)(i): maximin value, computed from the transposed game on its own LP.
ValueVector apply_T_tilde(const GameModel& m, std::span<const double> J);
/// Player I fixed at μ; player II best-responds (max over pure columns).
ValueVector apply_T_mu(const GameModel& m, const StationaryPolicy& mu, std::span<const double> J);
/// Player II fixed at ν; player I best-responds (min over pure rows).
ValueVector apply_T_nu(const GameModel& m, const StationaryPolicy& nu, std::span<const double> J);
/// Affine map c(μ,ν) + P(μ,ν)J.
ValueVector apply_T_munu(const GameModel& m, const StationaryPolicy& mu,
                         const StationaryPolicy& nu, std::span<const double> J);

/// (FQ)(ℓ) = g(ℓ) + Σ_j p_ℓj val_j(Q).
QTable apply_F(const GameModel& m, const QTable& Q);

QTable q_from_j(const GameModel& m, std::span<const double> J);
ValueVector j_from_q(const GameModel& m, const QTable& Q);

struct PolicyPair {
  StationaryPolicy mu;
  StationaryPolicy nu;
};

/// Per-state matrix-game solutions of Q(i,·,·).
PolicyPair greedy_policies(const GameModel& m, const QTable& Q);

}  // namespace sspg
