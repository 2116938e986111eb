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

#include "sspg/structure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sspg {
namespace {

constexpr std::size_t kMaxWitnesses = 16;

// Successor nodes reachable in one step from state i when the opponent plays
// its control `a` and the fixed player randomizes per `fixed`.
std::vector<NodeId> support(const GameModel& m, const StationaryPolicy& fixed, StateId i,
                            std::size_t a) {
  std::vector<NodeId> out;
  const DecisionRule& rule = fixed[i];
  for (std::size_t c = 0; c < rule.size(); ++c) {
    if (rule[c] == 0.0) continue;
    const Triplet t = fixed.player == Player::I ? Triplet{i, c, a} : Triplet{i, a, c};
    for (const Outcome& o : m.outcomes(t)) {
      if (o.prob > 0.0) out.push_back(o.next);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// supports[i][a] for every state and opponent control.
std::vector<std::vector<std::vector<NodeId>>> all_supports(const GameModel& m,
                                                           const StationaryPolicy& fixed) {
  check_policy(m, fixed, fixed.player);
  const Player opp = opponent(fixed.player);
  std::vector<std::vector<std::vector<NodeId>>> s(m.num_states());
  for (StateId i = 0; i < m.num_states(); ++i) {
    for (std::size_t a = 0; a < m.num_controls(opp, i); ++a) s[i].push_back(support(m, fixed, i, a));
  }
  return s;
}

bool subset_of(const std::vector<NodeId>& nodes, const std::vector<bool>& set) {
  return std::all_of(nodes.begin(), nodes.end(), [&](NodeId j) { return set[j]; });
}

bool meets(const std::vector<NodeId>& nodes, const std::vector<bool>& set) {
  return std::any_of(nodes.begin(), nodes.end(), [&](NodeId j) { return set[j]; });
}

std::string pair_description(const GameModel& m, const StationaryPolicy& mu,
                             const StationaryPolicy& nu) {
  std::ostringstream os;
  for (StateId i = 0; i < m.num_states(); ++i) {
    if (i) os << ", ";
    os << m.state_name(i) << ":(u=";
    if (auto k = mu[i].pure_index()) {
      os << m.controls(Player::I, i)[*k];
    } else {
      os << "mixed";
    }
    os << ",v=";
    if (auto k = nu[i].pure_index()) {
      os << m.controls(Player::II, i)[*k];
    } else {
      os << "mixed";
    }
    os << ')';
  }
  return os.str();
}

bool has_class_with(const std::vector<RecurrentClass>& classes, bool (*pred)(double)) {
  for (std::size_t k = 0; k + 1 < classes.size(); ++k) {
    if (pred(classes[k].gain)) return true;
  }
  return false;
}

// Pair evaluation that skips the linear algebra for terminating pairs.
PairEvaluation quick_evaluate(const GameModel& m, const StationaryPolicy& mu,
                              const StationaryPolicy& nu) {
  const InducedChain chain = induce_chain(m, mu, nu);
  const std::vector<bool> reach = reach_probability_one(chain);
  if (std::all_of(reach.begin(), reach.end(), [](bool b) { return b; })) {
    PairEvaluation ev;
    ev.reaches_termination = reach;
    ev.values.assign(m.num_states(), 0.0);
    return ev;
  }
  return evaluate_pair(m, mu, nu);
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Violated: return "violated";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::optional<std::size_t> pure_policy_count(const GameModel& m, Player p, std::size_t cap) {
  std::size_t total = 1;
  for (StateId i = 0; i < m.num_states(); ++i) {
    const std::size_t k = m.num_controls(p, i);
    if (k == 0) return std::nullopt;
    if (total > cap / k) return std::nullopt;
    total *= k;
  }
  return total;
}

StationaryPolicy nth_pure_policy(const GameModel& m, Player p, std::size_t k) {
  std::vector<std::size_t> choice(m.num_states());
  for (StateId i = 0; i < m.num_states(); ++i) {
    const std::size_t radix = m.num_controls(p, i);
    choice[i] = k % radix;
    k /= radix;
  }
  return pure_policy(m, p, choice);
}

std::vector<bool> forall_termination(const GameModel& m, const StationaryPolicy& fixed) {
  const auto supp = all_supports(m, fixed);
  const std::size_t n = m.num_states();

  // X: states from which the opponent can avoid 0 forever.
  std::vector<bool> x(m.num_nodes(), true);
  x[kTermination] = false;
  for (bool changed = true; changed;) {
    changed = false;
    for (StateId i = 0; i < n; ++i) {
      if (!x[node_of(i)]) continue;
      const bool keep = std::any_of(supp[i].begin(), supp[i].end(),
                                    [&](const auto& s) { return subset_of(s, x); });
      if (!keep) {
        x[node_of(i)] = false;
        changed = true;
      }
    }
  }
  // B: states from which X is hit with positive probability for some choice.
  std::vector<bool> b = x;
  for (bool changed = true; changed;) {
    changed = false;
    for (StateId i = 0; i < n; ++i) {
      if (b[node_of(i)]) continue;
      const bool hit = std::any_of(supp[i].begin(), supp[i].end(),
                                   [&](const auto& s) { return meets(s, b); });
      if (hit) {
        b[node_of(i)] = true;
        changed = true;
      }
    }
  }
  std::vector<bool> out(n);
  for (StateId i = 0; i < n; ++i) out[i] = !b[node_of(i)];
  return out;
}

std::vector<bool> exists_termination(const GameModel& m, const StationaryPolicy& fixed) {
  const auto supp = all_supports(m, fixed);
  const std::size_t n = m.num_states();
  std::vector<bool> u(m.num_nodes(), true);
  for (;;) {
    std::vector<bool> r(m.num_nodes(), false);
    r[kTermination] = true;
    for (bool changed = true; changed;) {
      changed = false;
      for (StateId i = 0; i < n; ++i) {
        if (r[node_of(i)] || !u[node_of(i)]) continue;
        const bool ok = std::any_of(supp[i].begin(), supp[i].end(), [&](const auto& s) {
          return subset_of(s, u) && meets(s, r);
        });
        if (ok) {
          r[node_of(i)] = true;
          changed = true;
        }
      }
    }
    if (r == u) break;
    u = std::move(r);
  }
  std::vector<bool> out(n);
  for (StateId i = 0; i < n; ++i) out[i] = u[node_of(i)];
  return out;
}

namespace {

ProperCheck essentially_proper_player1(const GameModel& m, const StationaryPolicy& mu) {
  ProperCheck out;
  const std::vector<bool> ex = exists_termination(m, mu);
  for (StateId i = 0; i < m.num_states(); ++i) {
    if (!ex[i]) {
      out.verdict = Verdict::Violated;
      out.reason = "no opponent response terminates from state " + m.state_name(i);
      out.witness_state = i;
      return out;
    }
  }
  const std::vector<bool> fa = forall_termination(m, mu);
  if (std::all_of(fa.begin(), fa.end(), [](bool b) { return b; })) {
    out.verdict = Verdict::Holds;
    out.reason = "proper: every opponent response terminates";
    return out;
  }
  const auto count = pure_policy_count(m, Player::II);
  if (!count) {
    out.reason = "too large: opponent pure policy space exceeds the enumeration cap";
    return out;
  }
  bool strict = true;
  for (std::size_t k = 0; k < *count; ++k) {
    StationaryPolicy nu = nth_pure_policy(m, Player::II, k);
    const InducedChain chain = induce_chain(m, mu, nu);
    const std::vector<bool> reach = reach_probability_one(chain);
    if (std::all_of(reach.begin(), reach.end(), [](bool b) { return b; })) continue;
    PairEvaluation ev = evaluate_pair(m, mu, nu);
    if (!ev.any_minus_infinity()) {
      out.verdict = Verdict::Violated;
      out.reason = ev.zero_gain_prolonging
                       ? "prolonging response with a zero-gain recurrent class"
                       : "prolonging response without an infinitely negative total";
      out.witness = std::move(nu);
      return out;
    }
    if (has_class_with(ev.classes, [](double g) { return g >= -kGainTolerance; })) strict = false;
  }
  if (strict) {
    out.verdict = Verdict::Holds;
    out.reason = "every prolonging pure response has only negative-gain recurrent classes";
  } else {
    out.reason =
        "pure responses pass, but some prolonging class has non-negative gain; randomized "
        "responses are not covered";
  }
  return out;
}

}  // namespace

ProperCheck is_essentially_proper(const GameModel& m, const StationaryPolicy& policy) {
  check_policy(m, policy, policy.player);
  if (policy.player == Player::I) return essentially_proper_player1(m, policy);
  ProperCheck r = essentially_proper_player1(swap_players(m), swap_players(policy));
  if (r.witness) r.witness = swap_players(*r.witness);
  return r;
}

Verdict AssumptionReport::overall() const {
  const Verdict all[] = {safeguard_player1.verdict, safeguard_player2.verdict,
                         prolonging_pairs.verdict};
  if (std::find(std::begin(all), std::end(all), Verdict::Violated) != std::end(all)) {
    return Verdict::Violated;
  }
  if (std::find(std::begin(all), std::end(all), Verdict::Inconclusive) != std::end(all)) {
    return Verdict::Inconclusive;
  }
  return Verdict::Holds;
}

AssumptionReport check_ssp_game_assumption(const GameModel& m) {
  AssumptionReport report;
  const auto cu = pure_policy_count(m, Player::I);
  const auto cv = pure_policy_count(m, Player::II);
  if (!cu || !cv || *cu > kEnumerationCap / *cv) {
    const std::string note = "too large: pure policy pairs exceed the enumeration cap";
    report.safeguard_player1.note = note;
    report.safeguard_player2.note = note;
    report.prolonging_pairs.note = note;
    return report;
  }

  std::vector<StationaryPolicy> mus, nus;
  for (std::size_t a = 0; a < *cu; ++a) mus.push_back(nth_pure_policy(m, Player::I, a));
  for (std::size_t b = 0; b < *cv; ++b) nus.push_back(nth_pure_policy(m, Player::II, b));
  std::vector<bool> mu_ok(*cu, true), nu_ok(*cv, true);
  bool any_prolonging = false;
  std::size_t violations = 0;

  for (std::size_t a = 0; a < *cu; ++a) {
    for (std::size_t b = 0; b < *cv; ++b) {
      PairEvaluation ev = quick_evaluate(m, mus[a], nus[b]);
      ++report.pairs_examined;
      if (ev.any_plus_infinity()) mu_ok[a] = false;
      if (ev.any_minus_infinity()) nu_ok[b] = false;
      if (!ev.prolonging) continue;
      any_prolonging = true;
      if (ev.all_finite()) {
        ++violations;
        if (report.witnesses.size() < kMaxWitnesses) {
          std::string desc = pair_description(m, mus[a], nus[b]);
          if (ev.zero_gain_prolonging) desc += " with a zero-gain recurrent class";
          report.witnesses.push_back(PairWitness{mus[a], nus[b], std::move(ev), std::move(desc)});
        }
      }
    }
  }

  auto safeguard = [](const std::vector<bool>& ok, const std::vector<StationaryPolicy>& pols,
                      const char* sign) {
    ClauseResult c;
    for (std::size_t k = 0; k < ok.size(); ++k) {
      if (ok[k]) {
        c.verdict = Verdict::Holds;
        c.note = std::string("pure policy never yields ") + sign;
        c.witness = pols[k];
        return c;
      }
    }
    c.note = std::string("every pure policy meets a response yielding ") + sign +
             "; randomized policies not searched";
    return c;
  };
  report.safeguard_player1 = safeguard(mu_ok, mus, "+inf");
  report.safeguard_player2 = safeguard(nu_ok, nus, "-inf");

  if (violations > 0) {
    report.prolonging_pairs.verdict = Verdict::Violated;
    report.prolonging_pairs.note =
        std::to_string(violations) + " prolonging pure pair(s) with finite total cost everywhere";
  } else {
    report.prolonging_pairs.verdict = Verdict::Holds;
    if (!any_prolonging) {
      report.prolonging_pairs.note = "no prolonging pure pairs";
    } else {
      const std::vector<double> g = expected_stage_costs(m);
      const bool positive = std::all_of(g.begin(), g.end(), [](double x) { return x > kGainTolerance; });
      const bool negative = std::all_of(g.begin(), g.end(), [](double x) { return x < -kGainTolerance; });
      report.pure_policy_caveat = !(positive || negative);
      report.prolonging_pairs.note = report.pure_policy_caveat
                                         ? "sufficient over pure policies only"
                                         : "stage costs are sign-definite";
    }
  }
  return report;
}

SspA build_sspa(const GameModel& m, const StationaryPolicy& nu_bar) {
  check_policy(m, nu_bar, Player::II);
  SspA s;
  s.num_states = m.num_states();
  s.num_triplets = m.num_triplets();
  s.controls.resize(s.size());
  s.rows.resize(s.size());
  s.names.resize(s.size());
  for (StateId i = 0; i < m.num_states(); ++i) {
    s.names[i] = m.state_name(i);
    s.controls[i] = m.controls(Player::I, i);
    for (std::size_t u = 0; u < m.num_controls(Player::I, i); ++u) {
      std::vector<double> p(m.num_nodes(), 0.0);
      SspA::Row row;
      for (std::size_t v = 0; v < m.num_controls(Player::II, i); ++v) {
        const double w = nu_bar[i][v];
        if (w == 0.0) continue;
        for (const Outcome& o : m.outcomes(Triplet{i, u, v})) {
          p[o.next] += w * o.prob;
          row.cost += w * o.prob * o.cost;
        }
      }
      for (NodeId j = 0; j < p.size(); ++j) {
        if (p[j] > 0.0) row.next.emplace_back(j, p[j]);
      }
      s.rows[i].push_back(std::move(row));
    }
  }
  for (std::size_t idx = 0; idx < m.num_triplets(); ++idx) {
    const std::size_t k = s.num_states + idx;
    s.names[k] = m.describe(m.triplet(idx));
    s.controls[k] = {"-"};
    SspA::Row row;
    for (const Outcome& o : m.outcomes(idx)) {
      row.next.emplace_back(o.next, o.prob);
      row.cost += o.prob * o.cost;
    }
    std::sort(row.next.begin(), row.next.end());
    s.rows[k].push_back(std::move(row));
  }
  return s;
}

SingleCheck check_single_player_ssp(const SspA& sspa) {
  // R-states move into S_o without control, so properness and infinite cost
  // are decided on the S-part alone.
  SingleCheck out;
  const std::size_t n = sspa.num_states;
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = sspa.rows[i].size();
    if (count > kEnumerationCap / k) {
      out.reason = "too large: pure policy space exceeds the enumeration cap";
      return out;
    }
    count *= k;
  }
  bool found_proper = false;
  std::vector<std::size_t> choice(n, 0);
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t rest = k;
    for (std::size_t i = 0; i < n; ++i) {
      choice[i] = rest % sspa.rows[i].size();
      rest /= sspa.rows[i].size();
    }
    InducedChain chain;
    chain.nodes = n + 1;
    chain.transition.assign(chain.nodes * chain.nodes, 0.0);
    chain.cost.assign(chain.nodes, 0.0);
    chain.p(kTermination, kTermination) = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const SspA::Row& row = sspa.rows[i][choice[i]];
      for (const auto& [j, p] : row.next) chain.p(node_of(i), j) += p;
      chain.cost[node_of(i)] = row.cost;
    }
    const std::vector<bool> reach = reach_probability_one(chain);
    if (std::all_of(reach.begin(), reach.end(), [](bool b) { return b; })) {
      found_proper = true;
      continue;
    }
    const auto classes = recurrent_class_gains(chain);
    if (!has_class_with(classes, [](double g) { return g > kGainTolerance; })) {
      out.verdict = Verdict::Violated;
      out.reason = "improper policy without infinite cost";
      out.witness = choice;
      return out;
    }
  }
  if (!found_proper) {
    out.verdict = Verdict::Violated;
    out.reason = "no proper pure policy";
    return out;
  }
  out.verdict = Verdict::Holds;
  out.reason = "a proper policy exists and every improper one has +inf cost somewhere";
  return out;
}

}  // namespace sspg
