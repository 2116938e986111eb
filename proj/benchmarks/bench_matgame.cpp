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

#include <random>

#include "sspg/matgame.hpp"

namespace {

void BM_SolveMatrixGame(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  std::vector<double> e(n * n);
  for (double& x : e) x = d(rng);
  const sspg::MatrixGame g(n, n, e);
  for (auto _ : state) benchmark::DoNotOptimize(sspg::matrix_game_value(g));
}
BENCHMARK(BM_SolveMatrixGame)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

}  // namespace
