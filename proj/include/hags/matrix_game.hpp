// Copyright 2026 The HAGS Authors
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

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "hags/errors.hpp"

namespace hags {

/// Dense row-major matrix of doubles. Rows index the maximizer's pure
/// actions, columns the minimizer's.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Probability distribution over an ordered pure-action list.
struct MixedStrategy {
  std::vector<double> probs;

  bool valid(double tol = 1e-9) const {
    double sum = 0.0;
    for (double p : probs) {
      if (p < -tol) return false;
      sum += p;
    }
    return probs.empty() || std::fabs(sum - 1.0) <= tol;
  }
};

/// Equilibrium of a zero-sum matrix game.
struct MatrixGameSolution {
  MixedStrategy row_strategy;  // maximizer
  MixedStrategy col_strategy;  // minimizer
  double value = 0.0;
};

namespace detail {

/// Bounded dense simplex for max c'x s.t. Ax <= b, x >= 0 with b >= 0
/// (slack basis feasible, no phase 1). Bland's rule throughout: entering
/// variable is the lowest-index negative reduced cost, leaving row breaks
/// ratio ties by lowest basis index. Deterministic and cycle-free.
class SimplexTableau {
 public:
  SimplexTableau(const Matrix& a, const std::vector<double>& b,
                 const std::vector<double>& c)
      : m_(a.rows()), n_(a.cols()), t_(m_ + 1, std::vector<double>(n_ + m_ + 1, 0.0)),
        basis_(m_) {
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) t_[i][j] = a(i, j);
      t_[i][n_ + i] = 1.0;
      t_[i][n_ + m_] = b[i];
      basis_[i] = n_ + i;
    }
    for (std::size_t j = 0; j < n_; ++j) t_[m_][j] = -c[j];
  }

  /// Runs to optimality; throws SolveError on pivot-cap overrun.
  void solve() {
    const std::size_t max_pivots = 2000 + 200 * (m_ + n_);
    for (std::size_t pivots = 0;; ++pivots) {
      if (pivots > max_pivots)
        throw SolveError("simplex pivot limit exceeded (" +
                         std::to_string(max_pivots) + ")");
      std::size_t enter = n_ + m_;
      for (std::size_t j = 0; j < n_ + m_; ++j) {
        if (t_[m_][j] < -kEps) {
          enter = j;
          break;
        }
      }
      if (enter == n_ + m_) return;  // optimal

      std::size_t leave = m_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        if (t_[i][enter] > kEps) {
          const double ratio = t_[i][n_ + m_] / t_[i][enter];
          if (ratio < best_ratio - kEps ||
              (ratio < best_ratio + kEps &&
               (leave == m_ || basis_[i] < basis_[leave]))) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave == m_) throw SolveError("simplex detected an unbounded program");
      pivot(leave, enter);
    }
  }

  double objective() const { return t_[m_][n_ + m_]; }

  /// Structural solution values.
  std::vector<double> primal() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = t_[i][n_ + m_];
    return x;
  }

  /// Dual values, read from the reduced costs on the slack columns.
  std::vector<double> dual() const {
    std::vector<double> y(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) y[i] = t_[m_][n_ + i];
    return y;
  }

 private:
  static constexpr double kEps = 1e-11;

  void pivot(std::size_t r, std::size_t s) {
    const double inv = 1.0 / t_[r][s];
    for (double& v : t_[r]) v *= inv;
    t_[r][s] = 1.0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r || t_[i][s] == 0.0) continue;
      const double f = t_[i][s];
      for (std::size_t j = 0; j <= n_ + m_; ++j) t_[i][j] -= f * t_[r][j];
      t_[i][s] = 0.0;
    }
    basis_[r] = s;
  }

  std::size_t m_, n_;
  std::vector<std::vector<double>> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

/// Exact mixed equilibrium of the zero-sum game with payoff matrix `m`
/// (row player maximizes m, column player minimizes).
///
/// Reduction: shift m to strictly positive entries, then solve
///   max 1'q  s.t.  m q <= 1, q >= 0
/// whose optimum gives value 1/(1'q), the column strategy q/(1'q), and the
/// row strategy from the duals. One simplex run yields both strategies.
///
/// The returned pair is certified on the original matrix: every pure row
/// deviation earns at most value + tol and every pure column deviation
/// concedes at least value - tol, otherwise SolveError is thrown.
inline MatrixGameSolution solve_matrix_game(const Matrix& m, double tol = 1e-9) {
  const std::size_t rows = m.rows(), cols = m.cols();
  if (rows == 0 || cols == 0)
    throw ValidationError("matrix game requires at least one action per player");

  double lo = std::numeric_limits<double>::infinity();
  for (double v : m.data()) {
    if (!std::isfinite(v)) throw SolveError("matrix game has non-finite payoff");
    lo = std::min(lo, v);
  }
  const double shift = 1.0 - std::min(lo, 0.0);

  Matrix a(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) a(r, c) = m(r, c) + shift;

  detail::SimplexTableau tableau(a, std::vector<double>(rows, 1.0),
                                 std::vector<double>(cols, 1.0));
  tableau.solve();

  const double z = tableau.objective();
  if (!(z > 0.0) || !std::isfinite(z))
    throw SolveError("matrix game solve is numerically degenerate");
  const double shifted_value = 1.0 / z;

  MatrixGameSolution sol;
  sol.value = shifted_value - shift;
  sol.col_strategy.probs = tableau.primal();
  sol.row_strategy.probs = tableau.dual();
  for (double& p : sol.col_strategy.probs) p *= shifted_value;
  for (double& p : sol.row_strategy.probs) p *= shifted_value;

  // Renormalize away the last few ulps so downstream sums are exact-ish.
  auto tidy = [](std::vector<double>& p) {
    double sum = 0.0;
    for (double& v : p) {
      if (v < 0.0 && v > -1e-12) v = 0.0;
      sum += v;
    }
    if (sum > 0.0)
      for (double& v : p) v /= sum;
  };
  tidy(sol.row_strategy.probs);
  tidy(sol.col_strategy.probs);

  // Equilibrium certificate on the original matrix.
  double worst_col = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < cols; ++c) {
    double v = 0.0;
    for (std::size_t r = 0; r < rows; ++r) v += sol.row_strategy.probs[r] * m(r, c);
    worst_col = std::min(worst_col, v);
  }
  double best_row = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < rows; ++r) {
    double v = 0.0;
    for (std::size_t c = 0; c < cols; ++c) v += m(r, c) * sol.col_strategy.probs[c];
    best_row = std::max(best_row, v);
  }
  if (!sol.row_strategy.valid(tol) || !sol.col_strategy.valid(tol) ||
      worst_col < sol.value - tol || best_row > sol.value + tol) {
    throw SolveError("equilibrium certificate violated beyond tolerance " +
                     std::to_string(tol));
  }
  return sol;
}

}  // namespace hags
