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

#include "sspg/qlearn.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "sspg/matgame.hpp"
#include "sspg/random_stream.hpp"

namespace sspg {
namespace {

// Stream keys. The low two bits separate the uses.
std::uint64_t transition_key(std::size_t ell) { return static_cast<std::uint64_t>(ell) << 2; }
constexpr std::uint64_t kSchedulerKey = 1;
constexpr std::size_t kSyncPeriod = 32;
std::uint64_t delay_key(std::size_t ell, std::size_t ell_tilde, std::size_t n) {
  return ((static_cast<std::uint64_t>(ell) * n + ell_tilde) << 2) | 2;
}

double block_value(const GameModel& m, StateId s, std::span<const double> block) {
  const std::size_t rows = m.num_controls(Player::I, s);
  const std::size_t cols = m.num_controls(Player::II, s);
  if (rows == 1) return *std::max_element(block.begin(), block.end());
  if (cols == 1) return *std::min_element(block.begin(), block.end());
  return matrix_game_value(MatrixGame(rows, cols, std::vector<double>(block.begin(), block.end())));
}

std::vector<std::size_t> active_set(const Scheduler& s, std::uint64_t seed, std::size_t t,
                                    std::size_t n) {
  std::vector<std::size_t> out;
  switch (s.kind) {
    case SchedulerKind::All:
      out.resize(n);
      for (std::size_t k = 0; k < n; ++k) out[k] = k;
      break;
    case SchedulerKind::UniformRandom: {
      // Floyd's sampling without replacement.
      RandomStream rs(seed, kSchedulerKey, static_cast<std::uint64_t>(t) * s.k);
      for (std::size_t r = n - s.k; r < n; ++r) {
        const std::size_t pick = static_cast<std::size_t>(rs.next_below(r + 1));
        if (std::find(out.begin(), out.end(), pick) == out.end()) {
          out.push_back(pick);
        } else {
          out.push_back(r);
        }
      }
      std::sort(out.begin(), out.end());
      break;
    }
    case SchedulerKind::RoundRobin:
      for (std::size_t r = 0; r < s.k; ++r) out.push_back((t * s.k + r) % n);
      std::sort(out.begin(), out.end());
      break;
    case SchedulerKind::Custom:
      out = s.sets[t % s.sets.size()];
      break;
  }
  return out;
}

void validate_config(const GameModel& m, const QLearnConfig& cfg, const QTable& Q0) {
  cfg.stepsize.validate();
  const std::size_t n = m.num_triplets();
  if (Q0.size() != n) throw std::invalid_argument("Q0 size does not match the number of triplets");
  for (double q : Q0.values()) {
    if (!std::isfinite(q)) throw std::invalid_argument("Q0 has a non-finite entry");
  }
  const Scheduler& s = cfg.scheduler;
  if (s.kind == SchedulerKind::UniformRandom || s.kind == SchedulerKind::RoundRobin) {
    if (s.k == 0 || s.k > n) throw std::invalid_argument("scheduler k must lie in [1, |R|]");
  }
  if (s.kind == SchedulerKind::Custom) {
    if (s.sets.empty()) throw std::invalid_argument("custom scheduler needs at least one set");
    for (const auto& set : s.sets) {
      std::vector<std::size_t> sorted = set;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("custom scheduler set repeats a component");
      }
      for (std::size_t c : set) {
        if (c >= n) throw std::invalid_argument("custom scheduler component out of range");
      }
    }
  }
  for (const auto& [key, offset] : cfg.delay.schedule) {
    if (offset > std::get<0>(key)) throw std::invalid_argument("delay schedule has offset > t");
  }
  if (cfg.reference && cfg.reference->size() != n) {
    throw std::invalid_argument("reference Q size mismatch");
  }
}

void fnv(std::uint64_t& h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t k = 0; k < len; ++k) {
    h ^= p[k];
    h *= 0x100000001b3ULL;
  }
}

template <class T>
void fnv_value(std::uint64_t& h, T v) {
  fnv(h, &v, sizeof v);
}

double max_abs(std::span<const double> q) { return sup_norm(q); }

}  // namespace

double Stepsize::at(std::uint64_t updates) const {
  const double g = a / std::pow(b + static_cast<double>(updates), p);
  if (!(g < 1.0)) return 1.0;  // also catches b + m = 0
  return std::max(g, 0.0);
}

void Stepsize::validate() const {
  if (!(a > 0.0)) throw std::invalid_argument("stepsize a must be positive");
  if (!(b >= 0.0)) throw std::invalid_argument("stepsize b must be nonnegative");
  if (!(p > 0.5 && p <= 1.0)) throw std::invalid_argument("stepsize p must lie in (0.5, 1]");
}

std::size_t DelayModel::max_offset() const {
  switch (kind) {
    case DelayKind::Zero: return 0;
    case DelayKind::UniformBounded: return bound;
    case DelayKind::FixedSchedule: {
      std::size_t mx = 0;
      for (const auto& [key, offset] : schedule) mx = std::max(mx, offset);
      return mx;
    }
  }
  return 0;
}

DelayModel parse_delay_schedule(std::istream& is) {
  DelayModel d;
  d.kind = DelayKind::FixedSchedule;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && line.find_first_not_of("0123456789, ") != std::string::npos) continue;
    std::size_t f[4];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int k = 0; k < 4; ++k) {
      while (p < end && *p == ' ') ++p;
      auto [next, ec] = std::from_chars(p, end, f[k]);
      if (ec != std::errc()) {
        throw std::invalid_argument("delay schedule line " + std::to_string(lineno) +
                                    ": expected t,l,ltilde,offset");
      }
      p = next;
      while (p < end && *p == ' ') ++p;
      if (k < 3) {
        if (p == end || *p != ',') {
          throw std::invalid_argument("delay schedule line " + std::to_string(lineno) +
                                      ": expected 4 fields");
        }
        ++p;
      }
    }
    if (f[3] > f[0]) {
      throw std::invalid_argument("delay schedule line " + std::to_string(lineno) +
                                  ": offset exceeds t");
    }
    d.schedule[{f[0], f[1], f[2]}] = f[3];
  }
  return d;
}

std::uint64_t seed_from_environment(std::uint64_t fallback) {
  const char* env = std::getenv("SSPG_SEED");
  if (env == nullptr) return fallback;
  std::uint64_t v = 0;
  const char* end = env + std::strlen(env);
  auto [p, ec] = std::from_chars(env, end, v);
  if (ec != std::errc() || p != end) return fallback;
  return v;
}

std::size_t UpdateEvent::max_offset() const {
  return offsets.empty() ? 0 : *std::max_element(offsets.begin(), offsets.end());
}

DivergenceError::DivergenceError(std::size_t t, std::size_t component, const std::string& what)
    : std::runtime_error(what), t_(t), component_(component) {}

double qlearning_update(const GameModel& m, double q_old, std::span<const double> view, NodeId j,
                        double realized_cost, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("stepsize outside [0, 1]");
  if (view.size() != m.num_triplets()) throw std::invalid_argument("view size mismatch");
  if (gamma == 0.0) return q_old;
  const double val = successor_value(m, view, j);
  return (1.0 - gamma) * q_old + gamma * (realized_cost + val);
}

std::size_t delay_offset(const DelayModel& d, std::uint64_t seed, std::size_t t, std::size_t ell,
                         std::size_t ell_tilde, std::size_t num_triplets) {
  switch (d.kind) {
    case DelayKind::Zero: return 0;
    case DelayKind::UniformBounded: {
      const std::size_t cap = std::min(d.bound, t);
      if (cap == 0) return 0;
      RandomStream rs(seed, delay_key(ell, ell_tilde, num_triplets), t);
      return static_cast<std::size_t>(rs.next_below(cap + 1));
    }
    case DelayKind::FixedSchedule: {
      auto it = d.schedule.find({t, ell, ell_tilde});
      if (it == d.schedule.end()) return 0;
      if (it->second > t) throw std::invalid_argument("delay schedule has offset > t");
      return it->second;
    }
  }
  return 0;
}

QLearnResult run_qlearning(const GameModel& m, const QLearnConfig& cfg, const QTable& Q0) {
  validate_config(m, cfg, Q0);
  const std::size_t n = m.num_triplets();
  const std::size_t depth = cfg.delay.max_offset() + 1;

  QLearnResult res;
  QLearnRun& run = res.run;
  run.config = cfg;
  run.initial = Q0;
  run.history_recorded = cfg.record_full_history;
  run.update_counts.assign(n, 0);
  run.peak_abs_q = max_abs(Q0.values());

  std::vector<QTable> ring(depth, Q0);
  std::vector<double> block;
  const std::size_t every = std::max<std::size_t>(cfg.metrics_every, 1);

  auto record_metrics = [&](std::size_t t, const QTable& q) {
    MetricsRow row;
    row.t = t;
    row.sup_dist = cfg.reference ? sup_distance(q.values(), cfg.reference->values())
                                 : std::numeric_limits<double>::quiet_NaN();
    row.max_abs_q = max_abs(q.values());
    row.residual = std::numeric_limits<double>::quiet_NaN();
    if (cfg.residual_every > 0 && t % cfg.residual_every == 0) {
      row.residual = sup_distance(q.values(), apply_F(m, q).values());
    }
    run.metrics.push_back(row);
  };
  record_metrics(0, Q0);

  for (std::size_t t = 0; t < cfg.max_iters; ++t) {
    const std::vector<std::size_t> active = active_set(cfg.scheduler, cfg.seed, t, n);
    const QTable& cur = ring[t % depth];
    QTable next = cur;
    if (run.history_recorded) run.iteration_begin.push_back(run.events.size());

    for (std::size_t ell : active) {
      const double gamma = cfg.stepsize.at(run.update_counts[ell]);
      // Delays are a function of (seed, t, ℓ, ℓ̃) only, hence fixed before the
      // transition is drawn.
      const TransitionSample s = sample_transition(
          m, ell, RandomStream(cfg.seed, transition_key(ell), run.update_counts[ell]));
      UpdateEvent ev;
      ev.t = t;
      ev.component = ell;
      ev.successor = s.next;
      ev.cost = s.cost;
      ev.gamma = gamma;
      double val = 0.0;
      if (s.next != kTermination) {
        const StateId st = state_of(s.next);
        const std::size_t begin = m.block_begin(st);
        const std::size_t size = m.block_size(st);
        block.resize(size);
        ev.offsets.resize(size);
        for (std::size_t k = 0; k < size; ++k) {
          const std::size_t d = delay_offset(cfg.delay, cfg.seed, t, ell, begin + k, n);
          ev.offsets[k] = d;
          block[k] = ring[(t - d) % depth][begin + k];
        }
        val = block_value(m, st, block);
      }
      const double q = (1.0 - gamma) * cur[ell] + gamma * (s.cost + val);
      if (!std::isfinite(q)) {
        std::ostringstream os;
        os << "non-finite Q entry at iteration " << t << ", component "
           << m.describe(m.triplet(ell));
        throw DivergenceError(t, ell, os.str());
      }
      next[ell] = q;
      run.peak_abs_q = std::max(run.peak_abs_q, std::abs(q));
      ++run.update_counts[ell];
      if (run.history_recorded) run.events.push_back(std::move(ev));
    }
    ring[(t + 1) % depth] = std::move(next);
    run.iterations = t + 1;
    if ((t + 1) % every == 0 || t + 1 == cfg.max_iters) record_metrics(t + 1, ring[(t + 1) % depth]);
  }
  if (run.history_recorded) run.iteration_begin.push_back(run.events.size());
  res.Q = ring[run.iterations % depth];
  run.digest = run_digest(run, res.Q);
  return res;
}

QLearnResult run_qlearning_parallel(const GameModel& m, const QLearnConfig& cfg, const QTable& Q0,
                                    std::size_t threads) {
  validate_config(m, cfg, Q0);
  const std::size_t n = m.num_triplets();
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
  std::vector<std::atomic<double>> shared(n);
  for (std::size_t k = 0; k < n; ++k) shared[k].store(Q0[k], std::memory_order_relaxed);
  std::vector<std::uint64_t> counts(n, 0);
  std::vector<double> peaks(threads, max_abs(Q0.values()));
  std::atomic<bool> failed{false};
  std::string failure;

  // Workers meet every kSyncPeriod iterations, which bounds the staleness of
  // what they read by about that many iterations.
  std::barrier sync(static_cast<std::ptrdiff_t>(threads));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        std::vector<double> block;
        try {
          for (std::size_t t = 0; t < cfg.max_iters && !failed.load(); ++t) {
            if (t > 0 && t % kSyncPeriod == 0) sync.arrive_and_wait();
            for (std::size_t ell : active_set(cfg.scheduler, cfg.seed, t, n)) {
              if (ell % threads != w) continue;
              const double gamma = cfg.stepsize.at(counts[ell]);
              const TransitionSample s = sample_transition(
                  m, ell, RandomStream(cfg.seed, transition_key(ell), counts[ell]));
              double val = 0.0;
              if (s.next != kTermination) {
                const StateId st = state_of(s.next);
                const std::size_t begin = m.block_begin(st);
                block.resize(m.block_size(st));
                for (std::size_t k = 0; k < block.size(); ++k) {
                  block[k] = shared[begin + k].load(std::memory_order_acquire);
                }
                val = block_value(m, st, block);
              }
              // Single writer per component: the read-modify-write cannot tear.
              const double old = shared[ell].load(std::memory_order_relaxed);
              const double q = (1.0 - gamma) * old + gamma * (s.cost + val);
              if (!std::isfinite(q)) throw DivergenceError(t, ell, "non-finite Q entry");
              shared[ell].store(q, std::memory_order_release);
              peaks[w] = std::max(peaks[w], std::abs(q));
              ++counts[ell];
            }
          }
        } catch (const std::exception& e) {
          if (!failed.exchange(true)) failure = e.what();
        }
        sync.arrive_and_drop();
      });
    }
  }
  if (failed.load()) throw std::runtime_error(failure);

  QLearnResult res;
  std::vector<double> q(n);
  for (std::size_t k = 0; k < n; ++k) q[k] = shared[k].load();
  res.Q = QTable(std::move(q));
  res.run.config = cfg;
  res.run.initial = Q0;
  res.run.iterations = cfg.max_iters;
  res.run.update_counts = std::move(counts);
  res.run.peak_abs_q = *std::max_element(peaks.begin(), peaks.end());
  res.run.history_recorded = false;
  MetricsRow row;
  row.t = cfg.max_iters;
  row.sup_dist = cfg.reference ? sup_distance(res.Q.values(), cfg.reference->values())
                               : std::numeric_limits<double>::quiet_NaN();
  row.max_abs_q = max_abs(res.Q.values());
  row.residual = std::numeric_limits<double>::quiet_NaN();
  res.run.metrics.push_back(row);
  res.run.digest = run_digest(res.run, res.Q);
  return res;
}

double noise_term(const GameModel& m, std::size_t component, std::span<const double> view,
                  NodeId j, double realized_cost) {
  if (view.size() != m.num_triplets()) throw std::invalid_argument("view size mismatch");
  double expected = 0.0;
  for (const Outcome& o : m.outcomes(component)) {
    expected += o.prob * (o.cost + successor_value(m, view, o.next));
  }
  return realized_cost + successor_value(m, view, j) - expected;
}

std::vector<double> noise_decomposition(const QLearnRun& run, const GameModel& m) {
  if (!run.history_recorded) throw std::invalid_argument("run was recorded without history");
  std::vector<double> w;
  w.reserve(run.events.size());
  RunReplay replay(m, run);
  while (!replay.done()) {
    for (const UpdateEvent& e : replay.events()) {
      const QTable view = replay.full_view(e.component);
      w.push_back(noise_term(m, e.component, view.values(), e.successor, e.cost));
    }
    replay.step();
  }
  return w;
}

std::uint64_t run_digest(const QLearnRun& run, const QTable& final_q) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  fnv_value(h, static_cast<std::uint64_t>(run.iterations));
  for (const UpdateEvent& e : run.events) {
    fnv_value(h, static_cast<std::uint64_t>(e.t));
    fnv_value(h, static_cast<std::uint64_t>(e.component));
    fnv_value(h, static_cast<std::uint64_t>(e.successor));
    fnv_value(h, e.cost);
    fnv_value(h, e.gamma);
    for (std::size_t d : e.offsets) fnv_value(h, static_cast<std::uint64_t>(d));
  }
  for (double q : final_q.values()) fnv_value(h, q);
  return h;
}

void write_qlearn_csv(std::ostream& os, const GameModel& m, const QLearnRun& run) {
  const auto old = os.precision(17);
  os << "t,active_component,j_sample,cost,gamma,max_delay_used,sup_dist_to_ref,max_abs_q\n";
  std::vector<const MetricsRow*> by_t(run.iterations + 1, nullptr);
  for (const MetricsRow& r : run.metrics) {
    if (r.t < by_t.size()) by_t[r.t] = &r;
  }
  for (const UpdateEvent& e : run.events) {
    os << e.t << ",\"" << m.describe(m.triplet(e.component)) << "\"," << m.node_name(e.successor)
       << ',' << e.cost << ',' << e.gamma << ',' << e.max_offset() << ',';
    if (const MetricsRow* r = by_t[e.t + 1]) {
      if (!std::isnan(r->sup_dist)) os << r->sup_dist;
      os << ',' << r->max_abs_q;
    } else {
      os << ',';
    }
    os << '\n';
  }
  os.precision(old);
}

RunReplay::RunReplay(const GameModel& m, const QLearnRun& run)
    : m_(m), run_(run), ring_(run.config.delay.max_offset() + 1, run.initial) {
  if (!run.history_recorded) throw std::invalid_argument("run was recorded without history");
  if (run.initial.size() != m.num_triplets()) throw std::invalid_argument("run/model mismatch");
}

double RunReplay::past(std::size_t offset, std::size_t ell_tilde) const {
  if (offset > t_ || offset >= ring_.size()) throw std::out_of_range("delay beyond history");
  return ring_[(t_ - offset) % ring_.size()][ell_tilde];
}

std::vector<double> RunReplay::view_for(const UpdateEvent& e) const {
  if (e.successor == kTermination) return {};
  const StateId st = state_of(e.successor);
  const std::size_t begin = m_.block_begin(st);
  std::vector<double> out(m_.block_size(st));
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = past(e.offsets.at(k), begin + k);
  return out;
}

QTable RunReplay::full_view(std::size_t ell) const {
  const std::size_t n = m_.num_triplets();
  QTable v(m_);
  for (std::size_t k = 0; k < n; ++k) {
    v[k] = past(delay_offset(run_.config.delay, run_.config.seed, t_, ell, k, n), k);
  }
  return v;
}

std::span<const UpdateEvent> RunReplay::events() const {
  const std::size_t b = run_.iteration_begin.at(t_);
  const std::size_t e = run_.iteration_begin.at(t_ + 1);
  return std::span<const UpdateEvent>(run_.events).subspan(b, e - b);
}

void RunReplay::step() {
  if (done()) throw std::logic_error("replay already at the end of the run");
  const QTable& cur = current();
  QTable next = cur;
  for (const UpdateEvent& e : events()) {
    double val = 0.0;
    if (e.successor != kTermination) val = block_value(m_, state_of(e.successor), view_for(e));
    next[e.component] = (1.0 - e.gamma) * cur[e.component] + e.gamma * (e.cost + val);
  }
  ++t_;
  ring_[t_ % ring_.size()] = std::move(next);
}

}  // namespace sspg
