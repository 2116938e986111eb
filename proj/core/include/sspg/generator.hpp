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
#include <cstdint>
#include <string>

#include "sspg/model.hpp"

namespace sspg {

enum class Family {
  /// Every triplet terminates with probability at least κ.
  Contraction,
  /// Player I's first control terminates with probability at least κ; the
  /// others may loop. Costs are positive.
  Loopy,
  /// One player moves per state; every triplet keeps the κ floor.
  Sequential,
};

std::string to_string(Family f);
Family family_from_string(const std::string& s);

struct GeneratorConfig {
  std::size_t n_states = 3;
  std::size_t max_controls = 2;
  double termination_floor = 0.1;
  double cost_lo = -1.0;
  double cost_hi = 1.0;
  Family family = Family::Contraction;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Deterministic in cfg.seed. Control counts are drawn from
/// [1, max_controls]; successor supports are random subsets of S ∪ {0}.
GameModel generate_model(const GeneratorConfig& cfg);

}  // namespace sspg
