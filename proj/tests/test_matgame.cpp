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

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sspg/matgame.hpp"

using namespace sspg;

namespace {

// max over columns of ρᵀA and min over rows of Aσ.
void expect_certificate(const MatrixGame& g, const MatrixGameSolution& s, double tol) {
  const BestResponse col = best_response_value(g, s.row_strategy.probabilities(), Side::Row);
  const BestResponse row = best_response_value(g, s.col_strategy.probabilities(), Side::Col);
  EXPECT_LE(col.value, s.value + tol);
  EXPECT_GE(row.value, s.value - tol);
  double v = 0.0;
  for (std::size_t r = 0; r < g.rows(); ++r) {
    for (std::size_t c = 0; c < g.cols(); ++c) v += s.row_strategy[r] * g(r, c) * s.col_strategy[c];
  }
  EXPECT_NEAR(v, s.value, tol);
}

MatrixGame random_game(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  std::uniform_real_distribution<double> entry(-10.0, 10.0);
  const std::size_t r = dim(rng), c = dim(rng);
  std::vector<double> e(r * c);
  for (double& x : e) x = entry(rng);
  return MatrixGame(r, c, std::move(e));
}

}  // namespace

TEST(MatrixGame, MatchingPennies) {
  const MatrixGameSolution s = solve_matrix_game(MatrixGame{{1, -1}, {-1, 1}});
  EXPECT_NEAR(s.value, 0.0, 1e-12);
  EXPECT_NEAR(s.row_strategy[0], 0.5, 1e-12);
  EXPECT_NEAR(s.col_strategy[0], 0.5, 1e-12);
}

TEST(MatrixGame, Singleton) {
  const MatrixGameSolution s = solve_matrix_game(MatrixGame{{5}});
  EXPECT_EQ(s.value, 5.0);
  EXPECT_EQ(s.row_strategy.pure_index(), std::optional<std::size_t>(0));
  EXPECT_EQ(s.col_strategy.pure_index(), std::optional<std::size_t>(0));
}

TEST(MatrixGame, IndifferenceOracle) {
  // Frozen: value 1.5, ρ* = (0.25, 0.75), σ* = (0.5, 0.5).
  EXPECT_DOUBLE_EQ(oracle::value_2x2(3, 0, 1, 2), 1.5);
  EXPECT_DOUBLE_EQ(oracle::row_weight_2x2(3, 0, 1, 2), 0.25);
  const MatrixGameSolution s = solve_matrix_game(MatrixGame{{3, 0}, {1, 2}});
  EXPECT_NEAR(s.value, 1.5, 1e-12);
  EXPECT_NEAR(s.row_strategy[0], 0.25, 1e-12);
  EXPECT_NEAR(s.col_strategy[0], 0.5, 1e-12);
}

TEST(MatrixGame, EverettFixedPointMatrix) {
  EXPECT_NEAR(matrix_game_value(MatrixGame{{1, 0}, {1, 1}}), 1.0, 1e-12);
}

TEST(MatrixGame, BestResponseTieBreaksLow) {
  const MatrixGame g{{3, 0}, {1, 2}};
  const std::vector<double> rho{0.25, 0.75};
  const BestResponse b = best_response_value(g, rho, Side::Row);
  EXPECT_DOUBLE_EQ(b.value, 1.5);
  EXPECT_EQ(b.witness, 0u);
  const std::vector<double> any{1.0};
  EXPECT_EQ(best_response_value(MatrixGame{{5}}, any, Side::Row).value, 5.0);
  const std::vector<double> first{1.0, 0.0};
  const BestResponse p = best_response_value(MatrixGame{{1, -1}, {-1, 1}}, first, Side::Row);
  EXPECT_EQ(p.value, 1.0);
  EXPECT_EQ(p.witness, 0u);
  EXPECT_THROW(best_response_value(g, any, Side::Row), std::invalid_argument);
}

TEST(MatrixGame, DegenerateShapesArePure) {
  const MatrixGameSolution row = solve_matrix_game(MatrixGame{{4, -2, 7}});
  EXPECT_EQ(row.value, 7.0);
  EXPECT_EQ(row.col_strategy.pure_index(), std::optional<std::size_t>(2));
  const MatrixGameSolution col = solve_matrix_game(MatrixGame{{4}, {-2}, {7}});
  EXPECT_EQ(col.value, -2.0);
  EXPECT_EQ(col.row_strategy.pure_index(), std::optional<std::size_t>(1));
}

TEST(MatrixGame, RejectsNonFiniteEntries) {
  EXPECT_THROW(MatrixGame(1, 1, {std::nan("")}), std::invalid_argument);
  EXPECT_THROW(MatrixGame(0, 1, {}), std::invalid_argument);
}

TEST(MatrixGameProperty, AllSmallIntegerGamesMatchOracle) {
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b)
      for (int c = -3; c <= 3; ++c)
        for (int d = -3; d <= 3; ++d) {
          const MatrixGame g{{double(a), double(b)}, {double(c), double(d)}};
          ASSERT_NEAR(matrix_game_value(g), oracle::value_2x2(a, b, c, d), 1e-9)
              << a << ' ' << b << ' ' << c << ' ' << d;
        }
}

TEST(MatrixGameProperty, DualityCertificateOnRandomGames) {
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 500; ++k) {
    const MatrixGame g = random_game(rng);
    const MatrixGameSolution s = solve_matrix_game(g);
    expect_certificate(g, s, 1e-8);
    // Maximin computed as the negated value of the transposed game.
    EXPECT_NEAR(s.value, -matrix_game_value(g.transposed_negated()), 1e-8);
  }
}

TEST(MatrixGameProperty, ShiftScaleEquivariance) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> alpha(0.1, 5.0), beta(-20.0, 20.0);
  for (int k = 0; k < 200; ++k) {
    const MatrixGame g = random_game(rng);
    const double a = alpha(rng), b = beta(rng);
    std::vector<double> e(g.entries().begin(), g.entries().end());
    for (double& x : e) x = a * x + b;
    const MatrixGame h(g.rows(), g.cols(), e);
    const MatrixGameSolution s = solve_matrix_game(g);
    EXPECT_NEAR(matrix_game_value(h), a * s.value + b, 1e-8 * (1 + std::abs(b) + a * 10));
    MatrixGameSolution moved = s;
    moved.value = a * s.value + b;
    expect_certificate(h, moved, 1e-7);
  }
}

TEST(MatrixGameProperty, Deterministic) {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 50; ++k) {
    const MatrixGame g = random_game(rng);
    const MatrixGameSolution a = solve_matrix_game(g), b = solve_matrix_game(g);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.row_strategy, b.row_strategy);
    EXPECT_EQ(a.col_strategy, b.col_strategy);
  }
}
