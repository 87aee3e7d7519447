#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "moran/field.hpp"

namespace moran {

namespace detail {

// Pivot preference for exact elimination: smallest operand size keeps
// intermediate fractions short.
inline double pivot_weight(const Rational& x) {
  return static_cast<double>(mpz_sizeinbase(x.get_num().get_mpz_t(), 2) +
                             mpz_sizeinbase(x.get_den().get_mpz_t(), 2));
}
inline double pivot_weight(double x) { return -std::fabs(x); }

}  // namespace detail

/**
 * Solves A x = b by Gauss-Jordan elimination with full pivoting.  Exact over
 * rationals; over doubles the full pivot doubles as magnitude pivoting.
 * Throws numeric_error when A is singular.
 */
template <class F>
std::vector<F> solve_linear(std::vector<std::vector<F>> A, std::vector<F> b) {
  const int n = static_cast<int>(A.size());
  if (n == 0 || static_cast<int>(b.size()) != n) throw argument_error("solve_linear: shape mismatch");
  std::vector<int> pivot_col(n, -1);
  std::vector<char> used_row(n, 0), used_col(n, 0);

  for (int step = 0; step < n; ++step) {
    int pr = -1, pc = -1;
    double best = 0;
    bool have = false;
    for (int i = 0; i < n; ++i) {
      if (used_row[i]) continue;
      for (int j = 0; j < n; ++j) {
        if (used_col[j] || field_traits<F>::is_zero(A[i][j])) continue;
        double w = detail::pivot_weight(A[i][j]);
        if (!have || w < best) {
          best = w;
          pr = i;
          pc = j;
          have = true;
        }
      }
    }
    if (!have) throw numeric_error("solve_linear: singular matrix");
    used_row[pr] = used_col[pc] = 1;
    pivot_col[pr] = pc;

    F inv = field_traits<F>::from_long(1) / A[pr][pc];
    for (int j = 0; j < n; ++j) A[pr][j] *= inv;
    b[pr] *= inv;
    for (int i = 0; i < n; ++i) {
      if (i == pr || field_traits<F>::is_zero(A[i][pc])) continue;
      F f = A[i][pc];
      for (int j = 0; j < n; ++j) A[i][j] -= f * A[pr][j];
      b[i] -= f * b[pr];
    }
  }

  std::vector<F> x(n, field_traits<F>::from_long(0));
  for (int i = 0; i < n; ++i) x[pivot_col[i]] = b[i];
  return x;
}

/// Double solve followed by one iterative-refinement pass in long double.
std::vector<double> solve_linear_refined(const std::vector<std::vector<double>>& A,
                                         const std::vector<double>& b);

/// Rank over the rationals (exact Gaussian elimination).
int rational_rank(std::vector<std::vector<Rational>> A);

}  // namespace moran
