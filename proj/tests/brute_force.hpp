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

#include <algorithm>
#include <limits>
#include <vector>

#include "sspg/solve.hpp"
#include "sspg/structure.hpp"

namespace brute {

/// min over pure μ of max over pure ν of x_i(μ,ν), per state, with every
/// pair evaluated exactly by evaluate_pair.
inline std::vector<double> minmax_over_pure_pairs(const sspg::GameModel& m) {
  using namespace sspg;
  const std::size_t nm = *pure_policy_count(m, Player::I);
  const std::size_t nn = *pure_policy_count(m, Player::II);
  std::vector<StationaryPolicy> nus;
  for (std::size_t k = 0; k < nn; ++k) nus.push_back(nth_pure_policy(m, Player::II, k));
  std::vector<double> best(m.num_states(), std::numeric_limits<double>::infinity());
  for (std::size_t a = 0; a < nm; ++a) {
    const StationaryPolicy mu = nth_pure_policy(m, Player::I, a);
    std::vector<double> worst(m.num_states(), -std::numeric_limits<double>::infinity());
    for (const StationaryPolicy& nu : nus) {
      const PairEvaluation ev = evaluate_pair(m, mu, nu);
      for (StateId i = 0; i < m.num_states(); ++i) worst[i] = std::max(worst[i], ev.values[i]);
    }
    for (StateId i = 0; i < m.num_states(); ++i) best[i] = std::min(best[i], worst[i]);
  }
  return best;
}

}  // namespace brute
