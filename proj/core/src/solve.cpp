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

#include "sspg/solve.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <ostream>

#include "sspg/structure.hpp"

namespace sspg {
namespace {

template <class Step>
SolveTrace iterate(std::vector<double>& x, Step step, const SolveOptions& opts,
                   std::vector<ValueVector>* iterates) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (opts.reference && opts.reference->size() != x.size()) {
    throw std::invalid_argument("reference size does not match the iterate");
  }
  SolveTrace trace;
  if (iterates) iterates->push_back(x);
  for (std::size_t t = 0;; ++t) {
    if (opts.stop.stop_requested()) {
      trace.status = SolveStatus::Cancelled;
      return trace;
    }
    if (t == opts.max_iter) {
      trace.status = SolveStatus::IterationCap;
      return trace;
    }
    std::vector<double> next = step(x);
    const double residual = sup_distance(next, x);
    x = std::move(next);
    TraceRow row{t, residual, std::nullopt};
    if (opts.reference) row.distance_to_ref = sup_distance(x, *opts.reference);
    trace.rows.push_back(row);
    if (iterates) iterates->push_back(x);
    if (!std::isfinite(residual) || sup_norm(x) > opts.divergence_bound) {
      trace.status = SolveStatus::Diverging;
      return trace;
    }
    if (residual <= opts.tol) {
      trace.status = SolveStatus::Converged;
      return trace;
    }
  }
}

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::IterationCap: return "iteration-cap";
    case SolveStatus::Diverging: return "diverging";
    case SolveStatus::Cancelled: return "cancelled";
  }
  return "unknown";
}

void write_trace_csv(std::ostream& os, const SolveTrace& trace) {
  const auto old = os.precision(17);
  os << "iteration,residual,distance_to_ref\n";
  for (const TraceRow& r : trace.rows) {
    os << r.iteration << ',' << r.residual << ',';
    if (r.distance_to_ref) os << *r.distance_to_ref;
    os << '\n';
  }
  os.precision(old);
}

ValueResult value_iteration(const GameModel& m, const ValueVector& J0, const SolveOptions& opts) {
  if (J0.size() != m.num_states()) throw std::invalid_argument("J0 size mismatch");
  ValueResult r;
  r.J = J0;
  r.trace = iterate(
      r.J, [&](const std::vector<double>& x) { return apply_T(m, x); }, opts,
      opts.record_iterates ? &r.iterates : nullptr);
  return r;
}

QValueResult q_value_iteration(const GameModel& m, const QTable& Q0, const SolveOptions& opts) {
  if (Q0.size() != m.num_triplets()) throw std::invalid_argument("Q0 size mismatch");
  std::vector<double> q(Q0.values().begin(), Q0.values().end());
  SolveTrace trace = iterate(
      q,
      [&](const std::vector<double>& x) {
        QTable next = apply_F(m, QTable(x));
        return std::vector<double>(next.values().begin(), next.values().end());
      },
      opts, nullptr);
  return {QTable(std::move(q)), std::move(trace)};
}

bool PairEvaluation::all_finite() const {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool PairEvaluation::any_plus_infinity() const {
  for (double v : values) {
    if (v == std::numeric_limits<double>::infinity()) return true;
  }
  return false;
}

bool PairEvaluation::any_minus_infinity() const {
  for (double v : values) {
    if (v == -std::numeric_limits<double>::infinity()) return true;
  }
  return false;
}

PairEvaluation evaluate_pair(const GameModel& m, const StationaryPolicy& mu,
                             const StationaryPolicy& nu) {
  const InducedChain chain = induce_chain(m, mu, nu);
  const std::size_t n = m.num_states();
  PairEvaluation ev;
  ev.reaches_termination = reach_probability_one(chain);
  ev.classes = recurrent_class_gains(chain);
  for (bool b : ev.reaches_termination) ev.prolonging |= !b;
  for (std::size_t k = 0; k + 1 < ev.classes.size(); ++k) {
    if (std::abs(ev.classes[k].gain) <= kGainTolerance) ev.zero_gain_prolonging = true;
  }
  ev.values.assign(n, 0.0);
  if (n == 0) return ev;

  if (!ev.prolonging) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                  static_cast<Eigen::Index>(n));
    Eigen::VectorXd c(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      c(static_cast<Eigen::Index>(i)) = chain.cost[node_of(i)];
      for (std::size_t j = 0; j < n; ++j) {
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -=
            chain.p(node_of(i), node_of(j));
      }
    }
    const Eigen::VectorXd x = a.partialPivLu().solve(c);
    for (std::size_t i = 0; i < n; ++i) ev.values[i] = x(static_cast<Eigen::Index>(i));
    return ev;
  }

  // Long-run gain G(i) = Σ_E a_E(i) g_E, where a_E are absorption
  // probabilities into the recurrent classes.
  const std::size_t nodes = chain.nodes;
  constexpr std::size_t transient = static_cast<std::size_t>(-1);
  std::vector<std::size_t> class_of(nodes, transient);
  for (std::size_t k = 0; k < ev.classes.size(); ++k) {
    for (NodeId b : ev.classes[k].nodes) class_of[b] = k;
  }
  std::vector<NodeId> trans;
  std::vector<Eigen::Index> pos(nodes, -1);
  for (NodeId b = 0; b < nodes; ++b) {
    if (class_of[b] == transient) {
      pos[b] = static_cast<Eigen::Index>(trans.size());
      trans.push_back(b);
    }
  }
  std::vector<double> gain(nodes, 0.0);
  for (NodeId b = 0; b < nodes; ++b) {
    if (class_of[b] != transient) gain[b] = ev.classes[class_of[b]].gain;
  }
  if (!trans.empty()) {
    const auto nt = static_cast<Eigen::Index>(trans.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(nt, nt);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nt);
    for (Eigen::Index r = 0; r < nt; ++r) {
      for (NodeId b = 0; b < nodes; ++b) {
        const double p = chain.p(trans[static_cast<std::size_t>(r)], b);
        if (p == 0.0) continue;
        if (class_of[b] == transient) {
          a(r, pos[b]) -= p;
        } else {
          rhs(r) += p * gain[b];
        }
      }
    }
    const Eigen::VectorXd g = a.partialPivLu().solve(rhs);
    for (Eigen::Index r = 0; r < nt; ++r) gain[trans[static_cast<std::size_t>(r)]] = g(r);
  }

  // Bias h: (I − P)h = c − G with π_E h_E = 0 on every class.
  const auto nn = static_cast<Eigen::Index>(nodes);
  const auto nc = static_cast<Eigen::Index>(ev.classes.size());
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(nn + nc, nn);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nn + nc);
  for (Eigen::Index r = 0; r < nn; ++r) {
    for (Eigen::Index c = 0; c < nn; ++c) {
      sys(r, c) = (r == c ? 1.0 : 0.0) -
                  chain.p(static_cast<NodeId>(r), static_cast<NodeId>(c));
    }
    rhs(r) = chain.cost[static_cast<std::size_t>(r)] - gain[static_cast<std::size_t>(r)];
  }
  for (Eigen::Index k = 0; k < nc; ++k) {
    const RecurrentClass& rc = ev.classes[static_cast<std::size_t>(k)];
    for (std::size_t e = 0; e < rc.nodes.size(); ++e) {
      sys(nn + k, static_cast<Eigen::Index>(rc.nodes[e])) = rc.stationary[e];
    }
  }
  const Eigen::VectorXd h = sys.completeOrthogonalDecomposition().solve(rhs);

  constexpr double inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double g = gain[node_of(i)];
    if (g > kGainTolerance) {
      ev.values[i] = inf;
    } else if (g < -kGainTolerance) {
      ev.values[i] = -inf;
    } else {
      ev.values[i] = h(static_cast<Eigen::Index>(node_of(i)));
    }
  }
  return ev;
}

ValueResult evaluate_vs_best_response(const GameModel& m, const StationaryPolicy& policy,
                                      const SolveOptions& opts, const ValueVector& start) {
  check_policy(m, policy, policy.player);
  ValueResult r;
  r.J = start.empty() ? ValueVector(m.num_states(), 0.0) : start;
  if (r.J.size() != m.num_states()) throw std::invalid_argument("start size mismatch");
  auto step = [&](const std::vector<double>& x) {
    return policy.player == Player::I ? apply_T_mu(m, policy, x) : apply_T_nu(m, policy, x);
  };
  r.trace = iterate(r.J, step, opts, opts.record_iterates ? &r.iterates : nullptr);
  return r;
}

namespace {

PolicyIterationResult policy_iteration_player1(const GameModel& m, const StationaryPolicy& start,
                                               const PolicyIterationOptions& opts) {
  PolicyIterationResult out;
  StationaryPolicy mu = start;
  ValueVector x(m.num_states(), 0.0);
  SolveOptions inner;
  inner.tol = opts.inner_tol;
  inner.max_iter = opts.inner_max_iter;
  inner.stop = opts.stop;

  for (std::size_t t = 0;; ++t) {
    if (opts.stop.stop_requested()) {
      out.trace.status = SolveStatus::Cancelled;
      break;
    }
    if (t == opts.max_outer) {
      out.trace.status = SolveStatus::IterationCap;
      break;
    }
    ValueResult ev = evaluate_vs_best_response(m, mu, inner, x);
    out.policies.push_back(mu);
    if (ev.trace.status != SolveStatus::Converged) {
      out.trace.status = ev.trace.status == SolveStatus::Cancelled ? SolveStatus::Cancelled
                                                                   : SolveStatus::Diverging;
      out.trace.offending_policy = t;
      break;
    }
    x = std::move(ev.J);
    out.values.push_back(x);
    const ValueVector tx = apply_T(m, x);
    const double residual = sup_distance(x, tx);
    out.trace.rows.push_back(TraceRow{t, residual, std::nullopt});
    if (residual <= opts.tol) {
      out.trace.status = SolveStatus::Converged;
      break;
    }
    mu = greedy_policies(m, q_from_j(m, x)).mu;
  }
  out.x = x;
  return out;
}

}  // namespace

PolicyIterationResult policy_iteration(const GameModel& m, const StationaryPolicy& start,
                                       const PolicyIterationOptions& opts) {
  check_policy(m, start, start.player);
  std::optional<std::string> warning;
  if (opts.check_start) {
    const ProperCheck check = is_essentially_proper(m, start);
    if (check.verdict != Verdict::Holds) {
      warning = "start policy not confirmed essentially proper: " + check.reason;
    }
  }
  if (start.player == Player::I) {
    PolicyIterationResult r = policy_iteration_player1(m, start, opts);
    r.warning = std::move(warning);
    return r;
  }
  // Player II maximizes; in the swapped game it is the minimizer of −cost.
  PolicyIterationResult r = policy_iteration_player1(swap_players(m), swap_players(start), opts);
  for (double& v : r.x) v = -v;
  for (ValueVector& xs : r.values) {
    for (double& v : xs) v = -v;
  }
  for (StationaryPolicy& p : r.policies) p = swap_players(p);
  r.warning = std::move(warning);
  return r;
}

}  // namespace sspg
