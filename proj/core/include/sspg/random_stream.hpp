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

#include <cstdint>

#include "sspg/model.hpp"

namespace sspg {

/// Counter-based generator: every draw is a pure function of
/// (seed, key, counter). Two streams with equal fields produce equal output,
/// which is what lets a recorded run be replayed bit for bit.
class RandomStream {
 public:
  constexpr RandomStream(std::uint64_t seed, std::uint64_t key, std::uint64_t counter = 0)
      : seed_(seed), key_(key), counter_(counter) {}

  /// Output at the current counter; advances the counter.
  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double next_uniform();
  /// Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n);

  /// Stateless access: output of stream (seed, key) at position counter.
  static std::uint64_t at(std::uint64_t seed, std::uint64_t key, std::uint64_t counter);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  friend bool operator==(const RandomStream&, const RandomStream&) = default;

 private:
  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_;
};

inline double to_unit_interval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

struct TransitionSample {
  NodeId next = kTermination;
  double cost = 0.0;
  RandomStream stream{0, 0};
};

/// Draws j ~ p_i·(u,v) by inverse CDF over the stored successor order and
/// returns the realized transition cost with the advanced stream.
TransitionSample sample_transition(const GameModel& m, const Triplet& t, RandomStream stream);
TransitionSample sample_transition(const GameModel& m, std::size_t triplet_index,
                                   RandomStream stream);

}  // namespace sspg
