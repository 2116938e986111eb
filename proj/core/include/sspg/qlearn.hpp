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
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "sspg/model.hpp"
#include "sspg/operators.hpp"

namespace sspg {

/// γ = a / (b + m)^p clamped to [0, 1], with m the number of earlier updates
/// of the component.
struct Stepsize {
  double a = 1.0;
  double b = 1.0;
  double p = 0.75;

  double at(std::uint64_t updates) const;
  void validate() const;
};

enum class SchedulerKind { All, UniformRandom, RoundRobin, Custom };

struct Scheduler {
  SchedulerKind kind = SchedulerKind::All;
  /// Active components per iteration for UniformRandom and RoundRobin.
  std::size_t k = 1;
  /// Custom: iteration t uses sets[t mod sets.size()].
  std::vector<std::vector<std::size_t>> sets;
};

enum class DelayKind { Zero, UniformBounded, FixedSchedule };

struct DelayModel {
  DelayKind kind = DelayKind::Zero;
  /// Bound D on t − τ for UniformBounded.
  std::size_t bound = 0;
  /// FixedSchedule: (t, ℓ, ℓ̃) → t − τ. Missing entries mean no delay.
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> schedule;

  /// Largest offset this model can produce.
  std::size_t max_offset() const;
};

/// Reads "t,l,ltilde,offset" rows (header optional). Rejects offset > t.
DelayModel parse_delay_schedule(std::istream& is);

struct QLearnConfig {
  std::uint64_t seed = 1;
  std::size_t max_iters = 0;
  Stepsize stepsize;
  Scheduler scheduler;
  DelayModel delay;
  std::optional<QTable> reference;
  /// Keep per-update events; required for replay, noise and coupling.
  bool record_full_history = true;
  /// Metrics are sampled every this many iterations (and at the last one).
  std::size_t metrics_every = 1;
  /// ‖Q − FQ‖_∞ is sampled every this many iterations; 0 disables it.
  std::size_t residual_every = 0;
};

/// Honors the SSPG_SEED environment variable when it holds an integer.
std::uint64_t seed_from_environment(std::uint64_t fallback);

struct UpdateEvent {
  std::size_t t = 0;
  std::size_t component = 0;
  NodeId successor = kTermination;
  double cost = 0.0;
  double gamma = 0.0;
  /// t − τ_{ℓℓ̃}(t) for each ℓ̃ in the successor's block, in block order.
  std::vector<std::size_t> offsets;

  std::size_t max_offset() const;
};

struct MetricsRow {
  std::size_t t = 0;          ///< iterations completed
  double sup_dist = 0.0;      ///< NaN without a reference
  double max_abs_q = 0.0;
  double residual = 0.0;      ///< NaN when not sampled
};

struct QLearnRun {
  QLearnConfig config;
  QTable initial;
  std::size_t iterations = 0;
  std::vector<UpdateEvent> events;
  /// events[iteration_begin[t] .. iteration_begin[t+1]) belong to iteration t.
  std::vector<std::size_t> iteration_begin;
  std::vector<MetricsRow> metrics;
  std::vector<std::uint64_t> update_counts;
  /// max over t and ℓ of |Q_t(ℓ)|, exact.
  double peak_abs_q = 0.0;
  std::uint64_t digest = 0;
  bool history_recorded = false;
};

/// Thrown when an iterate leaves the reals.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::size_t t, std::size_t component, const std::string& what);
  std::size_t iteration() const { return t_; }
  std::size_t component() const { return component_; }

 private:
  std::size_t t_;
  std::size_t component_;
};

/// (1−γ)·q_old + γ·(cost + val_j(view)), val_0 = 0.
double qlearning_update(const GameModel& m, double q_old, std::span<const double> view,
                        NodeId j, double realized_cost, double gamma);

/// t − τ_{ℓℓ̃}(t). A pure function of (seed, t, ℓ, ℓ̃) under every delay model.
std::size_t delay_offset(const DelayModel& d, std::uint64_t seed, std::size_t t, std::size_t ell,
                         std::size_t ell_tilde, std::size_t num_triplets);

struct QLearnResult {
  QTable Q;
  QLearnRun run;
};

QLearnResult run_qlearning(const GameModel& m, const QLearnConfig& cfg, const QTable& Q0);

/// Components split across `threads` workers that read a shared table of
/// atomics and meet at a barrier every 32 iterations; staleness plays the role
/// of the delays. Not bit-reproducible and records no events.
QLearnResult run_qlearning_parallel(const GameModel& m, const QLearnConfig& cfg, const QTable& Q0,
                                    std::size_t threads);

/// w = realized target − (F view)(ℓ) for one update.
double noise_term(const GameModel& m, std::size_t component, std::span<const double> view,
                  NodeId j, double realized_cost);

/// One w per recorded event, by deterministic replay of the run.
std::vector<double> noise_decomposition(const QLearnRun& run, const GameModel& m);

/// FNV-1a over the events and the final table.
std::uint64_t run_digest(const QLearnRun& run, const QTable& final_q);

/// t,active_component,j_sample,cost,gamma,max_delay_used,sup_dist_to_ref,max_abs_q
void write_qlearn_csv(std::ostream& os, const GameModel& m, const QLearnRun& run);

/// Replays the iterates of a recorded run. Iteration t reads the delayed view
/// and writes all of its updates together.
class RunReplay {
 public:
  RunReplay(const GameModel& m, const QLearnRun& run);

  bool done() const { return t_ == run_.iterations; }
  std::size_t t() const { return t_; }
  const QTable& current() const { return ring_[t_ % ring_.size()]; }

  /// Value of Q_{t − offset}(ℓ̃).
  double past(std::size_t offset, std::size_t ell_tilde) const;
  /// The delayed view Q_t^{(ℓ)} restricted to the block of node j, for the
  /// given event (j must be the event's successor).
  std::vector<double> view_for(const UpdateEvent& e) const;
  /// Delayed view of the whole table for component ℓ at the current t.
  QTable full_view(std::size_t ell) const;

  /// Events of the current iteration.
  std::span<const UpdateEvent> events() const;
  /// Advances to t + 1 by applying the recorded updates.
  void step();

 private:
  const GameModel& m_;
  const QLearnRun& run_;
  std::size_t t_ = 0;
  std::vector<QTable> ring_;
};

}  // namespace sspg
