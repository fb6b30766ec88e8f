#pragma once

// Row reduction over exact rationals.

#include <cstddef>
#include <optional>
#include <vector>

#include "lgheat/scalar.hpp"

namespace lgheat {

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Reduces m in place to reduced row echelon form; returns the pivot columns.
inline std::vector<std::size_t> row_reduce(RationalMatrix& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size();
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && sgn(m[p][c]) == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    const Rational inv = 1 / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(m[i][c]) == 0) continue;
      const Rational factor = m[i][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] -= factor * m[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(RationalMatrix m) { return row_reduce(m).size(); }

enum class SolveStatus { Unique, Inconsistent, Underdetermined };

struct LinearSolution {
  SolveStatus status;
  std::vector<Rational> x;
};

/// Solves A x = b exactly.
inline LinearSolution solve_linear(const RationalMatrix& a, const std::vector<Rational>& b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  RationalMatrix aug(rows, std::vector<Rational>(cols + 1));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) aug[i][j] = a[i][j];
    aug[i][cols] = b[i];
  }
  const auto pivots = row_reduce(aug);
  if (!pivots.empty() && pivots.back() == cols) return {SolveStatus::Inconsistent, {}};
  if (pivots.size() < cols) return {SolveStatus::Underdetermined, {}};
  std::vector<Rational> x(cols);
  for (std::size_t i = 0; i < cols; ++i) x[pivots[i]] = aug[i][cols];
  return {SolveStatus::Unique, x};
}

}  // namespace lgheat
