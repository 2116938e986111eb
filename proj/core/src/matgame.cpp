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

#include "sspg/matgame.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sspg {
namespace {

constexpr double kPivotEps = 1e-12;

std::vector<double> normalized(std::vector<double> w) {
  double total = 0.0;
  for (double& x : w) {
    if (x < 0.0) x = 0.0;
    total += x;
  }
  if (!(total > 0.0)) throw std::logic_error("matrix game: degenerate strategy from simplex");
  for (double& x : w) x /= total;
  return w;
}

// Dense tableau for  max Σ_i y_i  s.t.  Σ_i B(i,j) y_i <= 1  (one row per
// column j of B), y >= 0, with B > 0 elementwise. The slack basis is
// feasible, so no phase one is needed.
class Tableau {
 public:
  Tableau(const MatrixGame& g, double lo, double scale)
      : m_(g.rows()), n_(g.cols()), width_(m_ + n_ + 1), cells_(n_ * width_, 0.0),
        reduced_(m_ + n_, 0.0), basis_(n_) {
    for (std::size_t j = 0; j < n_; ++j) {
      double* row = &cells_[j * width_];
      for (std::size_t i = 0; i < m_; ++i) row[i] = (g(i, j) - lo) / scale + 1.0;
      row[m_ + j] = 1.0;
      row[width_ - 1] = 1.0;
      basis_[j] = m_ + j;
    }
    std::fill(reduced_.begin(), reduced_.begin() + static_cast<std::ptrdiff_t>(m_), 1.0);
  }

  void solve() {
    const std::size_t cap = 50 * (m_ + n_) * (m_ + n_) + 100;
    for (std::size_t iter = 0; iter < cap; ++iter) {
      // Bland: lowest-index improving column, lowest-index basic variable on ratio ties.
      std::size_t enter = reduced_.size();
      for (std::size_t k = 0; k < reduced_.size(); ++k) {
        if (reduced_[k] > kPivotEps) {
          enter = k;
          break;
        }
      }
      if (enter == reduced_.size()) return;

      std::size_t leave = n_;
      double best_ratio = 0.0;
      for (std::size_t r = 0; r < n_; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotEps) continue;
        const double ratio = at(r, width_ - 1) / a;
        if (leave == n_ || ratio < best_ratio - kPivotEps) {
          leave = r;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + kPivotEps && basis_[r] < basis_[leave]) {
          leave = r;
        }
      }
      if (leave == n_) throw std::logic_error("matrix game LP unbounded; entries not shifted?");
      pivot(leave, enter);
    }
    throw std::logic_error("matrix game simplex exceeded its pivot budget");
  }

  std::vector<double> primal() const {
    std::vector<double> y(m_, 0.0);
    for (std::size_t r = 0; r < n_; ++r) {
      if (basis_[r] < m_) y[basis_[r]] = at(r, width_ - 1);
    }
    return y;
  }

  std::vector<double> dual() const {
    std::vector<double> z(n_);
    for (std::size_t j = 0; j < n_; ++j) z[j] = -reduced_[m_ + j];
    return z;
  }

 private:
  double at(std::size_t r, std::size_t c) const { return cells_[r * width_ + c]; }

  void pivot(std::size_t pr, std::size_t pc) {
    double* prow = &cells_[pr * width_];
    const double inv = 1.0 / prow[pc];
    for (std::size_t c = 0; c < width_; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (std::size_t r = 0; r < n_; ++r) {
      if (r == pr) continue;
      double* row = &cells_[r * width_];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < width_; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
    }
    const double f = reduced_[pc];
    for (std::size_t c = 0; c + 1 < width_; ++c) reduced_[c] -= f * prow[c];
    reduced_[pc] = 0.0;
    basis_[pr] = pc;
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t width_;
  std::vector<double> cells_;
  std::vector<double> reduced_;
  std::vector<std::size_t> basis_;
};

std::vector<double> flatten(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<double> out;
  const std::size_t cols = rows.size() ? rows.begin()->size() : 0;
  for (const auto& r : rows) {
    if (r.size() != cols) throw std::invalid_argument("ragged matrix game");
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

MatrixGameSolution solve_degenerate(const MatrixGame& g) {
  if (g.rows() == 1) {
    BestResponse br = best_response_value(g, std::vector<double>{1.0}, Side::Row);
    return {br.value, DecisionRule::pure(1, 0), DecisionRule::pure(g.cols(), br.witness)};
  }
  BestResponse br = best_response_value(g, std::vector<double>{1.0}, Side::Col);
  return {br.value, DecisionRule::pure(g.rows(), br.witness), DecisionRule::pure(1, 0)};
}

}  // namespace

MatrixGame::MatrixGame(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("matrix game needs m, n >= 1");
  if (entries_.size() != rows_ * cols_) {
    throw std::invalid_argument("matrix game entry count does not match its shape");
  }
  for (double x : entries_) {
    if (!std::isfinite(x)) throw std::invalid_argument("matrix game entries must be finite");
  }
}

MatrixGame::MatrixGame(std::initializer_list<std::initializer_list<double>> rows)
    : MatrixGame(rows.size(), rows.size() ? rows.begin()->size() : 0, flatten(rows)) {}

MatrixGame MatrixGame::transposed_negated() const {
  std::vector<double> t(entries_.size());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t[c * rows_ + r] = -entries_[r * cols_ + c];
  }
  return MatrixGame(cols_, rows_, std::move(t));
}

MatrixGameSolution solve_matrix_game(const MatrixGame& g) {
  if (g.rows() == 1 || g.cols() == 1) return solve_degenerate(g);

  const auto [lo_it, hi_it] = std::minmax_element(g.entries().begin(), g.entries().end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (hi - lo <= 1e-300) {
    return {lo, DecisionRule::pure(g.rows(), 0), DecisionRule::pure(g.cols(), 0)};
  }
  const double scale = hi - lo;

  Tableau tableau(g, lo, scale);
  tableau.solve();
  std::vector<double> y = tableau.primal();
  std::vector<double> z = tableau.dual();
  double sum_y = 0.0;
  for (double x : y) sum_y += x;
  // Scaled game value is 1/Σy and lies in [1, 2].
  const double scaled_value = 1.0 / sum_y;

  MatrixGameSolution sol;
  sol.value = (scaled_value - 1.0) * scale + lo;
  sol.row_strategy = DecisionRule(normalized(std::move(y)));
  sol.col_strategy = DecisionRule(normalized(std::move(z)));
  return sol;
}

double matrix_game_value(const MatrixGame& g) { return solve_matrix_game(g).value; }

BestResponse best_response_value(const MatrixGame& g, std::span<const double> strategy,
                                 Side side) {
  const bool row = side == Side::Row;
  const std::size_t dim = row ? g.rows() : g.cols();
  const std::size_t options = row ? g.cols() : g.rows();
  if (strategy.size() != dim) {
    throw std::invalid_argument("best_response_value: strategy dimension mismatch");
  }
  std::vector<double> payoff(options, 0.0);
  for (std::size_t k = 0; k < options; ++k) {
    double s = 0.0;
    for (std::size_t d = 0; d < dim; ++d) s += strategy[d] * (row ? g(d, k) : g(k, d));
    payoff[k] = s;
  }
  const double best = row ? *std::max_element(payoff.begin(), payoff.end())
                          : *std::min_element(payoff.begin(), payoff.end());
  const double slack = 1e-12 * (1.0 + std::abs(best));
  std::size_t witness = 0;
  for (std::size_t k = 0; k < options; ++k) {
    if (std::abs(payoff[k] - best) <= slack) {
      witness = k;
      break;
    }
  }
  return {best, witness};
}

}  // namespace sspg
