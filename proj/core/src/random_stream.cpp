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

#include "sspg/random_stream.hpp"

namespace sspg {
namespace {

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t RandomStream::at(std::uint64_t seed, std::uint64_t key, std::uint64_t counter) {
  return splitmix64(splitmix64(splitmix64(seed) ^ key) ^ counter);
}

std::uint64_t RandomStream::next_u64() { return at(seed_, key_, counter_++); }

double RandomStream::next_uniform() { return to_unit_interval(next_u64()); }

std::uint64_t RandomStream::next_below(std::uint64_t n) {
  // Lemire's multiply-shift; the bias is below 2^-64 * n.
  __extension__ typedef unsigned __int128 u128;
  const u128 product = static_cast<u128>(next_u64()) * n;
  return static_cast<std::uint64_t>(product >> 64);
}

TransitionSample sample_transition(const GameModel& m, std::size_t triplet_index,
                                   RandomStream stream) {
  const auto& row = m.outcomes(triplet_index);
  const double u = stream.next_uniform();
  double cumulative = 0.0;
  const Outcome* chosen = nullptr;
  for (const Outcome& o : row) {
    if (o.prob <= 0.0) continue;
    chosen = &o;
    cumulative += o.prob;
    if (u < cumulative) break;
  }
  if (chosen == nullptr) throw std::logic_error("sample_transition on an empty row");
  return TransitionSample{chosen->next, chosen->cost, stream};
}

TransitionSample sample_transition(const GameModel& m, const Triplet& t, RandomStream stream) {
  return sample_transition(m, m.triplet_index(t), stream);
}

}  // namespace sspg
