#pragma once

#include "orbichow/matrix.hpp"

#include <optional>
#include <vector>

namespace orbichow {

// Exact phase-one simplex with Bland's rule: some x >= 0 with A x = b, or nullopt.
inline std::optional<RatVec> feasible_point(const RatMatrix& A, const RatVec& b) {
  const std::size_t m = A.rows(), n = A.cols();
  const std::size_t width = n + m + 1, rhs = n + m;
  RatMatrix T(m + 1, width);
  for (std::size_t i = 0; i < m; ++i) {
    bool flip = b[i] < 0;
    for (std::size_t j = 0; j < n; ++j) T(i, j) = flip ? Rational(-A(i, j)) : A(i, j);
    T(i, n + i) = 1;
    T(i, rhs) = flip ? Rational(-b[i]) : b[i];
  }
  // Reduced costs of the artificial-sum objective live in row m.
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) T(m, j) -= T(i, j);
  for (std::size_t i = 0; i < m; ++i) T(m, rhs) -= T(i, rhs);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  for (;;) {
    std::size_t enter = width;
    for (std::size_t j = 0; j < n + m; ++j)
      if (T(m, j) < 0) {
        enter = j;
        break;
      }
    if (enter == width) break;
    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (T(i, enter) <= 0) continue;
      Rational ratio = T(i, rhs) / T(i, enter);
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) break;  // unbounded direction cannot occur for a bounded-below objective
    Rational piv = T(leave, enter);
    for (std::size_t j = 0; j < width; ++j) T(leave, j) /= piv;
    for (std::size_t i = 0; i <= m; ++i)
      if (i != leave && T(i, enter) != 0) T.add_row(i, leave, -T(i, enter));
    basis[leave] = enter;
  }
  if (T(m, rhs) != 0) return std::nullopt;
  RatVec x(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) x[basis[i]] = T(i, rhs);
  return x;
}

// Some w (free sign) with G w >= h componentwise, or nullopt.
inline std::optional<RatVec> solve_inequalities(const RatMatrix& G, const RatVec& h) {
  const std::size_t r = G.rows(), n = G.cols();
  RatMatrix A(r, 2 * n + r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      A(i, j) = G(i, j);
      A(i, n + j) = -G(i, j);
    }
    A(i, 2 * n + i) = -1;
  }
  auto x = feasible_point(A, h);
  if (!x) return std::nullopt;
  RatVec w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = (*x)[j] - (*x)[n + j];
  return w;
}

}  // namespace orbichow
