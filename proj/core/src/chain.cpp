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

#include "sspg/chain.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <functional>

namespace sspg {
namespace {

std::vector<std::vector<NodeId>> support_graph(const InducedChain& c) {
  std::vector<std::vector<NodeId>> adj(c.nodes);
  for (NodeId a = 0; a < c.nodes; ++a) {
    for (NodeId b = 0; b < c.nodes; ++b) {
      if (c.p(a, b) > 0.0) adj[a].push_back(b);
    }
  }
  return adj;
}

// Tarjan; returns the component id of every node.
std::vector<std::size_t> strongly_connected(const std::vector<std::vector<NodeId>>& adj,
                                            std::size_t& count) {
  const std::size_t n = adj.size();
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unset), low(n, 0), comp(n, unset);
  std::vector<bool> on_stack(n, false);
  std::vector<NodeId> stack;
  std::size_t next = 0;
  count = 0;

  std::function<void(NodeId)> visit = [&](NodeId a) {
    index[a] = low[a] = next++;
    stack.push_back(a);
    on_stack[a] = true;
    for (NodeId b : adj[a]) {
      if (index[b] == unset) {
        visit(b);
        low[a] = std::min(low[a], low[b]);
      } else if (on_stack[b]) {
        low[a] = std::min(low[a], index[b]);
      }
    }
    if (low[a] == index[a]) {
      NodeId b;
      do {
        b = stack.back();
        stack.pop_back();
        on_stack[b] = false;
        comp[b] = count;
      } while (b != a);
      ++count;
    }
  };
  for (NodeId a = 0; a < n; ++a) {
    if (index[a] == unset) visit(a);
  }
  return comp;
}

}  // namespace

InducedChain induce_chain(const GameModel& m, const StationaryPolicy& mu,
                          const StationaryPolicy& nu) {
  check_policy(m, mu, Player::I);
  check_policy(m, nu, Player::II);
  InducedChain c;
  c.nodes = m.num_nodes();
  c.transition.assign(c.nodes * c.nodes, 0.0);
  c.cost.assign(c.nodes, 0.0);
  c.p(kTermination, kTermination) = 1.0;
  for (std::size_t idx = 0; idx < m.num_triplets(); ++idx) {
    const Triplet& t = m.triplet(idx);
    const double w = mu[t.state][t.u] * nu[t.state][t.v];
    if (w == 0.0) continue;
    const NodeId from = node_of(t.state);
    for (const Outcome& o : m.outcomes(idx)) {
      c.p(from, o.next) += w * o.prob;
      c.cost[from] += w * o.prob * o.cost;
    }
  }
  return c;
}

std::vector<bool> reach_probability_one(const InducedChain& chain) {
  // A state fails iff it can reach a state that cannot reach 0.
  const std::size_t n = chain.nodes;
  std::vector<std::vector<NodeId>> reverse(n);
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = 0; b < n; ++b) {
      if (chain.p(a, b) > 0.0) reverse[b].push_back(a);
    }
  }
  auto backward_closure = [&](std::vector<NodeId> seeds) {
    std::vector<bool> mark(n, false);
    for (NodeId s : seeds) mark[s] = true;
    while (!seeds.empty()) {
      const NodeId b = seeds.back();
      seeds.pop_back();
      for (NodeId a : reverse[b]) {
        if (!mark[a]) {
          mark[a] = true;
          seeds.push_back(a);
        }
      }
    }
    return mark;
  };

  const std::vector<bool> reaches_zero = backward_closure({kTermination});
  std::vector<NodeId> stuck;
  for (NodeId a = 0; a < n; ++a) {
    if (!reaches_zero[a]) stuck.push_back(a);
  }
  const std::vector<bool> doomed = backward_closure(stuck);
  std::vector<bool> out(n - 1);
  for (NodeId a = 1; a < n; ++a) out[state_of(a)] = !doomed[a];
  return out;
}

std::vector<RecurrentClass> recurrent_class_gains(const InducedChain& chain) {
  const auto adj = support_graph(chain);
  std::size_t count = 0;
  const auto comp = strongly_connected(adj, count);

  std::vector<bool> closed(count, true);
  for (NodeId a = 0; a < chain.nodes; ++a) {
    for (NodeId b : adj[a]) {
      if (comp[b] != comp[a]) closed[comp[a]] = false;
    }
  }

  std::vector<RecurrentClass> out;
  std::vector<bool> emitted(count, false);
  for (NodeId a = 0; a < chain.nodes; ++a) {
    const std::size_t k = comp[a];
    if (!closed[k] || emitted[k]) continue;
    emitted[k] = true;
    RecurrentClass rc;
    for (NodeId b = a; b < chain.nodes; ++b) {
      if (comp[b] == k) rc.nodes.push_back(b);
    }
    // πᵀ(I − P_E) = 0 with Σπ = 1, solved in the least-squares sense.
    const auto sz = static_cast<Eigen::Index>(rc.nodes.size());
    Eigen::MatrixXd a_mat = Eigen::MatrixXd::Zero(sz + 1, sz);
    for (Eigen::Index r = 0; r < sz; ++r) {
      for (Eigen::Index c = 0; c < sz; ++c) {
        a_mat(c, r) = (r == c ? 1.0 : 0.0) - chain.p(rc.nodes[r], rc.nodes[c]);
      }
    }
    a_mat.row(sz).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(sz + 1);
    rhs(sz) = 1.0;
    const Eigen::VectorXd pi = a_mat.colPivHouseholderQr().solve(rhs);
    rc.stationary.assign(pi.data(), pi.data() + sz);
    for (Eigen::Index r = 0; r < sz; ++r) rc.gain += pi(r) * chain.cost[rc.nodes[r]];
    out.push_back(std::move(rc));
  }
  // Node 0 is visited first, so its class heads the list; move it to the end.
  std::rotate(out.begin(), out.begin() + 1, out.end());
  return out;
}

}  // namespace sspg
