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

#include "sspg/generator.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace sspg {
namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : eng_(seed) {}

  // Portable: std::uniform_real_distribution differs across libraries.
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double between(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(unit() * static_cast<double>(n)); }
  std::size_t in_range(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }

 private:
  std::mt19937_64 eng_;
};

std::vector<std::string> labels(char prefix, std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < k; ++c) out.push_back(std::string(1, prefix) + std::to_string(c + 1));
  return out;
}

// Random distribution over a random nonempty subset of S ∪ {0}.
std::vector<double> random_distribution(Draw& d, std::size_t nodes) {
  std::vector<double> w(nodes, 0.0);
  const std::size_t support = d.in_range(1, nodes);
  std::vector<std::size_t> order(nodes);
  for (std::size_t k = 0; k < nodes; ++k) order[k] = k;
  for (std::size_t k = 0; k < support; ++k) {
    std::swap(order[k], order[k + d.below(nodes - k)]);
  }
  double total = 0.0;
  for (std::size_t k = 0; k < support; ++k) {
    const double x = 0.05 + d.unit();
    w[order[k]] = x;
    total += x;
  }
  for (double& x : w) x /= total;
  return w;
}

std::vector<Outcome> make_row(Draw& d, std::size_t nodes, double floor, double lo, double hi) {
  std::vector<double> w = random_distribution(d, nodes);
  std::vector<Outcome> row;
  for (NodeId j = 0; j < nodes; ++j) {
    double p = (1.0 - floor) * w[j];
    if (j == kTermination) p += floor;
    if (p > 0.0) row.push_back(Outcome{j, p, d.between(lo, hi)});
  }
  return row;
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::Contraction: return "contraction";
    case Family::Loopy: return "loopy";
    case Family::Sequential: return "sequential";
  }
  return "unknown";
}

Family family_from_string(const std::string& s) {
  if (s == "contraction") return Family::Contraction;
  if (s == "loopy") return Family::Loopy;
  if (s == "sequential") return Family::Sequential;
  throw std::invalid_argument("unknown model family: " + s);
}

void GeneratorConfig::validate() const {
  if (n_states == 0) throw std::invalid_argument("generator needs at least one state");
  if (max_controls == 0) throw std::invalid_argument("generator needs max_controls >= 1");
  if (!(termination_floor >= 0.0 && termination_floor <= 1.0)) {
    throw std::invalid_argument("termination floor must lie in [0, 1]");
  }
  if (!(cost_lo <= cost_hi)) throw std::invalid_argument("cost range needs lo <= hi");
  if (family == Family::Loopy) {
    if (!(cost_lo > 0.0)) throw std::invalid_argument("loopy family needs positive costs");
    if (!(termination_floor > 0.0)) throw std::invalid_argument("loopy family needs a floor > 0");
  }
}

GameModel generate_model(const GeneratorConfig& cfg) {
  cfg.validate();
  Draw d(cfg.seed);
  const std::size_t nodes = cfg.n_states + 1;
  GameModel m;
  for (std::size_t i = 0; i < cfg.n_states; ++i) {
    std::size_t c1 = d.in_range(1, cfg.max_controls);
    std::size_t c2 = d.in_range(1, cfg.max_controls);
    if (cfg.family == Family::Sequential) {
      if (d.below(2) == 0) {
        c2 = 1;
      } else {
        c1 = 1;
      }
    }
    m.add_state(std::to_string(i + 1), labels('u', c1), labels('v', c2));
  }
  for (std::size_t idx = 0; idx < m.num_triplets(); ++idx) {
    const Triplet t = m.triplet(idx);
    double floor = cfg.termination_floor;
    if (cfg.family == Family::Loopy && t.u != 0) floor = 0.0;
    m.set_outcomes(t, make_row(d, nodes, floor, cfg.cost_lo, cfg.cost_hi));
  }
  return m;
}

}  // namespace sspg
