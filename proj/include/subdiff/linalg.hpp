#pragma once

// Small dense linear algebra over exact or floating scalars. Systems here
// have at most a few dozen rows, so plain Gauss-Jordan elimination is used.

#include "subdiff/scalar.hpp"

#include <optional>
#include <vector>

namespace subdiff::linalg {

template <class T>
using Matrix = std::vector<std::vector<T>>;

/// Pivot threshold: exact zero for rationals, scaled epsilon for doubles.
template <class T>
bool is_negligible(const T& x, double scale = 1.0) {
  if constexpr (is_exact_v<T>) {
    (void)scale;
    return x == 0;
  } else {
    return std::abs(x) <= 1e-12 * std::max(1.0, scale);
  }
}

/// Reduced row echelon form in place; returns the pivot columns.
template <class T>
std::vector<std::size_t> rref(Matrix<T>& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size();
  const std::size_t cols = m.front().size();
  double scale = 0.0;
  if constexpr (!is_exact_v<T>) {
    for (const auto& r : m)
      for (const auto& v : r) scale = std::max(scale, std::abs(v));
  }
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t best = rows;
    if constexpr (is_exact_v<T>) {
      for (std::size_t r = row; r < rows; ++r)
        if (m[r][col] != 0) {
          best = r;
          break;
        }
    } else {
      double mag = 0.0;
      for (std::size_t r = row; r < rows; ++r)
        if (std::abs(m[r][col]) > mag) {
          mag = std::abs(m[r][col]);
          best = r;
        }
      if (best < rows && is_negligible(m[best][col], scale)) best = rows;
    }
    if (best == rows) continue;
    std::swap(m[row], m[best]);
    const T inv = T(1) / m[row][col];
    for (auto& v : m[row]) v *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row || m[r][col] == 0) continue;
      const T factor = m[r][col];
      for (std::size_t c = col; c < cols; ++c) m[r][c] -= factor * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

/// Basis of { x : A x = 0 }.
template <class T>
std::vector<Vector<T>> nullspace(Matrix<T> a, std::size_t cols) {
  std::vector<Vector<T>> basis;
  if (a.empty()) {
    for (std::size_t j = 0; j < cols; ++j) {
      Vector<T> e(cols);
      e[j] = T(1);
      basis.push_back(std::move(e));
    }
    return basis;
  }
  const auto pivots = rref(a);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    Vector<T> v(cols);
    v[free] = T(1);
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -a[k][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Solves the square system A x = b; nullopt when A is singular.
template <class T>
std::optional<std::vector<T>> solve(const Matrix<T>& a, const std::vector<T>& b) {
  const std::size_t n = a.size();
  Matrix<T> aug(n, std::vector<T>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n] = b[i];
  }
  // Restrict pivoting to the coefficient block.
  Matrix<T> coeff(n, std::vector<T>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) coeff[i][j] = a[i][j];
  if (rref(coeff).size() < n) return std::nullopt;
  const auto pivots = rref(aug);
  if (pivots.size() < n) return std::nullopt;
  std::vector<T> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = aug[i][n];
  return x;
}

/// Rank of a list of vectors.
template <class T>
std::size_t rank(const std::vector<Vector<T>>& rows) {
  if (rows.empty()) return 0;
  Matrix<T> m;
  for (const auto& r : rows) m.push_back(r.coords());
  return rref(m).size();
}

}  // namespace subdiff::linalg
