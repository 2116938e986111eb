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

#include "sspg/diag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "sspg/structure.hpp"

namespace sspg {
namespace {

// min_ũ Σ_ṽ ν̄(ṽ|s) q(s,ũ,ṽ) over the block of state s.
double averaged_min(const GameModel& m, const StationaryPolicy& nu_bar, StateId s,
                    std::span<const double> block) {
  const std::size_t rows = m.num_controls(Player::I, s);
  const std::size_t cols = m.num_controls(Player::II, s);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t u = 0; u < rows; ++u) {
    double avg = 0.0;
    for (std::size_t v = 0; v < cols; ++v) avg += nu_bar[s][v] * block[u * cols + v];
    best = std::min(best, avg);
  }
  return best;
}

}  // namespace

QTable apply_F_nu(const GameModel& m, const StationaryPolicy& nu_bar, const QTable& Q) {
  check_policy(m, nu_bar, Player::II);
  if (Q.size() != m.num_triplets()) throw std::invalid_argument("Q size mismatch");
  std::vector<double> vals(m.num_nodes(), 0.0);
  for (StateId s = 0; s < m.num_states(); ++s) {
    vals[node_of(s)] =
        averaged_min(m, nu_bar, s, Q.values().subspan(m.block_begin(s), m.block_size(s)));
  }
  QTable out(m);
  for (std::size_t idx = 0; idx < m.num_triplets(); ++idx) {
    double s = 0.0;
    for (const Outcome& o : m.outcomes(idx)) s += o.prob * (o.cost + vals[o.next]);
    out[idx] = s;
  }
  return out;
}

double weighted_sup_norm(std::span<const double> x, std::span<const double> xi) {
  if (x.size() != xi.size()) throw std::invalid_argument("weighted_sup_norm: size mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s = std::max(s, std::abs(x[k]) / xi[k]);
  return s;
}

ContractionCertificate build_contraction_certificate(const GameModel& m,
                                                     const StationaryPolicy& nu_bar) {
  check_policy(m, nu_bar, Player::II);
  const std::vector<bool> proper = forall_termination(m, nu_bar);
  if (!std::all_of(proper.begin(), proper.end(), [](bool b) { return b; })) {
    throw CertificateError("certificate requires a proper policy");
  }
  const std::size_t n = m.num_states();

  // p_ν̄,ij(u) restricted to j ∈ S, per state and control.
  std::vector<std::vector<std::vector<double>>> p_nu(n);
  for (StateId i = 0; i < n; ++i) {
    for (std::size_t u = 0; u < m.num_controls(Player::I, i); ++u) {
      std::vector<double> row(n, 0.0);
      for (std::size_t v = 0; v < m.num_controls(Player::II, i); ++v) {
        const double w = nu_bar[i][v];
        if (w == 0.0) continue;
        for (const Outcome& o : m.outcomes(Triplet{i, u, v})) {
          if (o.next != kTermination) row[state_of(o.next)] += w * o.prob;
        }
      }
      p_nu[i].push_back(std::move(row));
    }
  }

  ContractionCertificate c;
  c.j_hat.assign(n, 0.0);
  constexpr double tol = 1e-10;
  constexpr std::size_t cap = 1'000'000;
  bool converged = n == 0;
  for (std::size_t it = 0; it < cap && !converged; ++it) {
    std::vector<double> next(n);
    for (StateId i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& row : p_nu[i]) {
        double s = 0.0;
        for (StateId j = 0; j < n; ++j) s += row[j] * c.j_hat[j];
        best = std::min(best, s);
      }
      next[i] = -1.0 + best;
    }
    const double residual = sup_distance(next, c.j_hat);
    c.j_hat = std::move(next);
    c.iterations = it + 1;
    converged = residual <= tol;
  }
  if (!converged) throw CertificateError("certificate value iteration hit its iteration cap");

  c.xi.resize(m.num_triplets());
  for (std::size_t idx = 0; idx < m.num_triplets(); ++idx) {
    double s = 1.0;
    for (const Outcome& o : m.outcomes(idx)) {
      if (o.next != kTermination) s -= o.prob * c.j_hat[state_of(o.next)];
    }
    c.xi[idx] = s;
    c.beta = std::max(c.beta, (s - 1.0) / s);
  }
  c.xi_nu.resize(n);
  for (StateId i = 0; i < n; ++i) {
    for (std::size_t u = 0; u < m.num_controls(Player::I, i); ++u) {
      double s = 0.0;
      for (std::size_t v = 0; v < m.num_controls(Player::II, i); ++v) {
        s += nu_bar[i][v] * c.xi[m.triplet_index(Triplet{i, u, v})];
      }
      c.xi_nu[i].push_back(s);
    }
  }
  c.worst_slack = -std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < m.num_triplets(); ++idx) {
    double lhs = 0.0;
    for (const Outcome& o : m.outcomes(idx)) {
      if (o.next == kTermination) continue;
      const auto& xs = c.xi_nu[state_of(o.next)];
      lhs += o.prob * *std::max_element(xs.begin(), xs.end());
    }
    c.worst_slack = std::max(c.worst_slack, lhs - c.beta * c.xi[idx]);
  }
  if (m.num_triplets() == 0) c.worst_slack = 0.0;
  return c;
}

bool certificate_inequality_holds(const GameModel& m, const ContractionCertificate& c,
                                  double slack) {
  if (c.xi.size() != m.num_triplets() || c.xi_nu.size() != m.num_states()) return false;
  for (std::size_t idx = 0; idx < m.num_triplets(); ++idx) {
    double lhs = 0.0;
    for (const Outcome& o : m.outcomes(idx)) {
      if (o.next == kTermination) continue;
      const auto& xs = c.xi_nu[state_of(o.next)];
      lhs += o.prob * *std::max_element(xs.begin(), xs.end());
    }
    if (lhs > c.beta * c.xi[idx] + slack) return false;
  }
  return true;
}

CouplingReport run_coupled_lower_process(const GameModel& m, const StationaryPolicy& nu_bar,
                                         const QLearnRun& run, const QTable& Q0,
                                         double tolerance) {
  check_policy(m, nu_bar, Player::II);
  if (!run.history_recorded) {
    throw std::invalid_argument("coupling needs a run recorded with full history");
  }
  if (Q0 != run.initial) throw std::invalid_argument("Q̂_0 must equal the run's initial table");

  RunReplay replay(m, run);
  const std::size_t depth = run.config.delay.max_offset() + 1;
  std::vector<QTable> ring(depth, Q0);
  CouplingReport rep;
  rep.min_gap.assign(m.num_triplets(), 0.0);
  std::vector<double> block;

  while (!replay.done()) {
    const std::size_t t = replay.t();
    const QTable& cur = ring[t % depth];
    QTable next = cur;
    const auto events = replay.events();
    for (const UpdateEvent& e : events) {
      double val = 0.0;
      if (e.successor != kTermination) {
        const StateId s = state_of(e.successor);
        const std::size_t begin = m.block_begin(s);
        block.resize(m.block_size(s));
        for (std::size_t k = 0; k < block.size(); ++k) {
          block[k] = ring[(t - e.offsets.at(k)) % depth][begin + k];
        }
        val = averaged_min(m, nu_bar, s, block);
      }
      next[e.component] = (1.0 - e.gamma) * cur[e.component] + e.gamma * (e.cost + val);
    }
    ring[(t + 1) % depth] = std::move(next);
    replay.step();
    const QTable& q = replay.current();
    const QTable& qh = ring[(t + 1) % depth];
    for (const UpdateEvent& e : events) {
      const double gap = q[e.component] - qh[e.component];
      rep.min_gap[e.component] = std::min(rep.min_gap[e.component], gap);
      if (gap < -tolerance) {
        ++rep.violation_count;
        if (rep.violations.size() < 100) rep.violations.push_back({t + 1, e.component, gap});
      }
    }
  }
  rep.q_final = replay.current();
  rep.q_hat_final = ring[replay.t() % depth];
  return rep;
}

void write_coupling_csv(std::ostream& os, const GameModel& m, const CouplingReport& r) {
  const auto old = os.precision(17);
  os << "component,min_gap\n";
  for (std::size_t k = 0; k < r.min_gap.size(); ++k) {
    os << '"' << m.describe(m.triplet(k)) << "\"," << r.min_gap[k] << '\n';
  }
  os.precision(old);
}

TrackerState initial_trackers(const GameModel& m) {
  TrackerState s;
  s.g_tilde.assign(m.num_triplets(), 0.0);
  s.q_hat.assign(m.num_triplets(), std::vector<double>(m.num_nodes(), 0.0));
  for (std::size_t idx = 0; idx < m.num_triplets(); ++idx) {
    NodeId first = m.num_nodes();
    for (const Outcome& o : m.outcomes(idx)) {
      if (o.prob > 0.0) first = std::min(first, o.next);
    }
    if (first < m.num_nodes()) s.q_hat[idx][first] = 1.0;
  }
  return s;
}

void update_trackers(TrackerState& state, const TrackerEvent& e) {
  if (e.component >= state.g_tilde.size()) throw std::out_of_range("tracker component");
  if (!(e.gamma >= 0.0 && e.gamma <= 1.0)) throw std::invalid_argument("stepsize outside [0, 1]");
  double& g = state.g_tilde[e.component];
  g = (1.0 - e.gamma) * g + e.gamma * e.cost;
  std::vector<double>& q = state.q_hat[e.component];
  if (e.successor >= q.size()) throw std::out_of_range("tracker successor");
  for (double& x : q) x *= 1.0 - e.gamma;
  q[e.successor] += e.gamma;
}

bool tracker_support_ok(const GameModel& m, const TrackerState& state) {
  for (std::size_t idx = 0; idx < m.num_triplets(); ++idx) {
    std::vector<bool> allowed(m.num_nodes(), false);
    for (const Outcome& o : m.outcomes(idx)) {
      if (o.prob > 0.0) allowed[o.next] = true;
    }
    for (NodeId j = 0; j < m.num_nodes(); ++j) {
      if (state.q_hat[idx][j] != 0.0 && !allowed[j]) return false;
    }
  }
  return true;
}

}  // namespace sspg
