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
#include "sspg/operators.hpp"

namespace {

sspg::GameModel model(std::size_t states, std::size_t controls) {
  sspg::GeneratorConfig cfg;
  cfg.n_states = states;
  cfg.max_controls = controls;
  cfg.seed = 3;
  return sspg::generate_model(cfg);
}

void BM_ApplyT(benchmark::State& state) {
  const sspg::GameModel m = model(static_cast<std::size_t>(state.range(0)), 3);
  const std::vector<double> J(m.num_states(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(sspg::apply_T(m, J));
}
BENCHMARK(BM_ApplyT)->Arg(5)->Arg(20)->Arg(80);

void BM_ApplyF(benchmark::State& state) {
  const sspg::GameModel m = model(static_cast<std::size_t>(state.range(0)), 3);
  const sspg::QTable q(m, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(sspg::apply_F(m, q));
}
BENCHMARK(BM_ApplyF)->Arg(5)->Arg(20)->Arg(80);

}  // namespace
