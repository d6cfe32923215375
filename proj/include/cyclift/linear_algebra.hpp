#pragma once

// Dense Gaussian elimination over any exact field type providing + - *,
// inv(), is_zero() and one_like()/zero_like().

#include <bit>
#include <cstddef>
#include <optional>
#include <vector>

#include "cyclift/rational_function.hpp"

namespace cyclift {

template <class F>
using Matrix = std::vector<std::vector<F>>;

/// Heuristic preference among nonzero pivots; smaller is better.
template <class F>
struct PivotCost {
  static std::size_t cost(const F&) { return 0; }
};

template <>
struct PivotCost<RationalFunction> {
  static std::size_t cost(const RationalFunction& x) { return x.num().size() + x.den().size(); }
};

template <class F>
struct Echelon {
  Matrix<F> rows;                  // reduced row echelon form
  std::vector<std::size_t> pivots; // pivot column of each nonzero row
  std::size_t swaps = 0;
  F det_scale;                     // product of pivots divided out (for determinants)
};

/// Reduced row echelon form over `cols` columns.
template <class F>
Echelon<F> row_reduce(Matrix<F> m, std::size_t cols, const F& one) {
  Echelon<F> e;
  e.det_scale = one;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::optional<std::size_t> best;
    std::size_t best_cost = 0;
    for (std::size_t i = row; i < m.size(); ++i) {
      if (m[i][c].is_zero()) continue;
      std::size_t k = PivotCost<F>::cost(m[i][c]);
      if (!best || k < best_cost) {
        best = i;
        best_cost = k;
      }
    }
    if (!best) continue;
    if (*best != row) {
      std::swap(m[*best], m[row]);
      ++e.swaps;
    }
    const F piv = m[row][c];
    e.det_scale = e.det_scale * piv;
    const F inv = piv.inv();
    for (std::size_t j = c; j < cols; ++j)
      if (!m[row][j].is_zero()) m[row][j] = m[row][j] * inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == row || m[i][c].is_zero()) continue;
      const F f = m[i][c];
      for (std::size_t j = c; j < cols; ++j)
        if (!m[row][j].is_zero()) m[i][j] = m[i][j] - f * m[row][j];
    }
    e.pivots.push_back(c);
    ++row;
  }
  e.rows = std::move(m);
  return e;
}

template <class F>
std::size_t rank(const Matrix<F>& m, std::size_t cols, const F& one) {
  return row_reduce(m, cols, one).pivots.size();
}

/// Basis of {x : m x = 0}.
template <class F>
std::vector<std::vector<F>> nullspace(const Matrix<F>& m, std::size_t cols, const F& one) {
  const F zero = one - one;
  auto e = row_reduce(m, cols, one);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::vector<std::vector<F>> basis;
  for (std::size_t fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<F> v(cols, zero);
    v[fc] = one;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = zero - e.rows[r][fc];
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class F>
F determinant(const Matrix<F>& m, const F& one) {
  const std::size_t n = m.size();
  auto e = row_reduce(m, n, one);
  if (e.pivots.size() < n) return one - one;
  return (e.swaps % 2) ? (one - one) - e.det_scale : e.det_scale;
}

/// Division-free determinant by expansion along rows, memoized on column
/// subsets: O(n 2^n) ring multiplications. Suited to small matrices over
/// fields where inversion is expensive.
template <class F>
F determinant_expansion(const Matrix<F>& m, const F& one) {
  const std::size_t n = m.size();
  if (n == 0) return one;
  if (n > 20) throw AlgebraError("determinant_expansion: matrix too large");
  const F zero = one - one;
  // minors[S] = det of rows 0..|S|-1 restricted to the columns in S.
  std::vector<F> minors(std::size_t(1) << n, zero);
  minors[0] = one;
  for (std::size_t s = 1; s < minors.size(); ++s) {
    const auto row = static_cast<std::size_t>(std::popcount(s)) - 1;
    F acc = zero;
    std::size_t below = 0;  // columns of s smaller than c, for the sign
    for (std::size_t c = 0; c < n; ++c) {
      if (!(s >> c & 1)) continue;
      const F& sub = minors[s & ~(std::size_t(1) << c)];
      if (!m[row][c].is_zero() && !sub.is_zero()) {
        // Laplace along the last row: sign (-1)^{row + position of c}.
        F t = m[row][c] * sub;
        acc = ((row + below) % 2) ? acc - t : acc + t;
      }
      ++below;
    }
    minors[s] = acc;
  }
  return minors.back();
}

/// Some solution of m x = rhs, if one exists.
template <class F>
std::optional<std::vector<F>> solve(const Matrix<F>& m, const std::vector<F>& rhs,
                                    std::size_t cols, const F& one) {
  const F zero = one - one;
  Matrix<F> aug = m;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(rhs[i]);
  auto e = row_reduce(aug, cols + 1, one);
  if (!e.pivots.empty() && e.pivots.back() == cols) return std::nullopt;
  std::vector<F> x(cols, zero);
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.rows[r][cols];
  return x;
}

}  // namespace cyclift
