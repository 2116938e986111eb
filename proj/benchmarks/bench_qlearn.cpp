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

#include <benchmark/benchmark.h>

#include "sspg/generator.hpp"
#include "sspg/qlearn.hpp"

namespace {

void BM_QLearning(benchmark::State& state) {
  sspg::GeneratorConfig g;
  g.n_states = 4;
  g.max_controls = 2;
  g.seed = 5;
  const sspg::GameModel m = sspg::generate_model(g);
  sspg::QLearnConfig cfg;
  cfg.max_iters = static_cast<std::size_t>(state.range(0));
  cfg.scheduler = sspg::Scheduler{sspg::SchedulerKind::UniformRandom, 1, {}};
  cfg.delay.kind = sspg::DelayKind::UniformBounded;
  cfg.delay.bound = 5;
  cfg.record_full_history = state.range(1) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sspg::run_qlearning(m, cfg, sspg::QTable(m)).Q);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_QLearning)->Args({10000, 0})->Args({10000, 1})->Unit(benchmark::kMillisecond);

}  // namespace
