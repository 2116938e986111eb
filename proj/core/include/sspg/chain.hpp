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
#include <vector>

#include "sspg/model.hpp"

namespace sspg {

/// Markov chain over S ∪ {0} induced by a stationary policy pair.
/// Node 0 is absorbing with zero cost.
struct InducedChain {
  std::size_t nodes = 0;
  std::vector<double> transition;  ///< row-major, nodes × nodes
  std::vector<double> cost;        ///< expected stage cost per node

  double p(NodeId from, NodeId to) const { return transition[from * nodes + to]; }
  double& p(NodeId from, NodeId to) { return transition[from * nodes + to]; }
};

/// P[i][j] = Σ_u Σ_v μ(u|i) ν(v|i) p_ij(u,v); c[i] likewise with g.
InducedChain induce_chain(const GameModel& m, const StationaryPolicy& mu,
                          const StationaryPolicy& nu);

/// Per non-terminal state: does the chain reach 0 with probability one?
/// Decided on the support graph alone.
std::vector<bool> reach_probability_one(const InducedChain& chain);

struct RecurrentClass {
  std::vector<NodeId> nodes;        ///< ascending
  std::vector<double> stationary;   ///< aligned with `nodes`
  double gain = 0.0;
};

/// Closed communicating classes with their stationary distributions and
/// long-run average costs. Non-terminal classes come first, ordered by their
/// smallest node; the class {0} is last.
std::vector<RecurrentClass> recurrent_class_gains(const InducedChain& chain);

/// Gains with |gain| at or below this are treated as zero.
inline constexpr double kGainTolerance = 1e-9;

}  // namespace sspg
