#pragma once

#include <optional>
#include <vector>

#include "kbott/error.hpp"
#include "kbott/integer.hpp"

namespace kbott {

// Exact determinant of a square integer matrix by fraction-free Bareiss
// elimination. All intermediate divisions are exact, so the result is an
// exact Int with no rational arithmetic.
inline Int bareiss_determinant(std::vector<std::vector<Int>> a) {
  const std::size_t n = a.size();
  for (const auto& row : a)
    if (row.size() != n) throw_internal("bareiss_determinant: matrix not square");
  if (n == 0) return 1;

  Int prev_pivot = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && a[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Int numerator = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        a[i][j] = numerator / prev_pivot;  // exact by Bareiss' identity
      }
      a[i][k] = 0;
    }
    prev_pivot = a[k][k];
  }
  return sign > 0 ? a[n - 1][n - 1] : -a[n - 1][n - 1];
}

// Solves A x = b exactly over the rationals. Returns std::nullopt when A is
// singular. Pivoting picks the first nonzero entry in each column, which
// keeps the elimination deterministic.
inline std::optional<std::vector<Rat>> solve_rational(
    const std::vector<std::vector<Int>>& a, const std::vector<Int>& b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw_internal("solve_rational: dimension mismatch");
  std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw_internal("solve_rational: matrix not square");
    for (std::size_t j = 0; j < n; ++j) m[i][j] = Rat(a[i][j]);
    m[i][n] = Rat(b[i]);
  }

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(m[col], m[pivot]);
    const Rat inv = m[col][col];
    for (std::size_t j = col; j <= n; ++j) m[col][j] /= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || m[i][col] == 0) continue;
      const Rat factor = m[i][col];
      for (std::size_t j = col; j <= n; ++j) m[i][j] -= factor * m[col][j];
    }
  }

  std::vector<Rat> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = m[i][n];
  return x;
}

}  // namespace kbott
