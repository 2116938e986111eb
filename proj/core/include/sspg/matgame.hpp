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
#include <initializer_list>
#include <span>
#include <vector>

#include "sspg/model.hpp"

namespace sspg {

/// Zero-sum matrix game. Rows belong to the minimizer, columns to the
/// maximizer; entry (u, v) is the cost paid by the row player.
class MatrixGame {
 public:
  MatrixGame(std::size_t rows, std::size_t cols, std::vector<double> entries);
  MatrixGame(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  std::span<const double> entries() const { return entries_; }

  MatrixGame transposed_negated() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

struct MatrixGameSolution {
  double value = 0.0;
  DecisionRule row_strategy;
  DecisionRule col_strategy;
};

enum class Side { Row, Col };

struct BestResponse {
  double value = 0.0;
  std::size_t witness = 0;
};

/// Solves the game by linear programming: entries are mapped affinely into
/// [1, 2], the row player's LP is solved by a dense tableau simplex under
/// Bland's rule, and the column strategy is read off the dual prices.
/// One-row and one-column games short-circuit to pure min/max.
MatrixGameSolution solve_matrix_game(const MatrixGame& g);

/// Value only; same kernel as solve_matrix_game.
double matrix_game_value(const MatrixGame& g);

/// side == Row: `strategy` is the row player's, returns max_v (ρᵀA)_v.
/// side == Col: `strategy` is the column player's, returns min_u (Aσ)_u.
/// The witness is the lowest index attaining the extremum.
BestResponse best_response_value(const MatrixGame& g, std::span<const double> strategy, Side side);

}  // namespace sspg
