#include "moran/linalg.hpp"

namespace moran {

std::vector<double> solve_linear_refined(const std::vector<std::vector<double>>& A,
                                         const std::vector<double>& b) {
  const int n = static_cast<int>(A.size());
  std::vector<double> x = solve_linear(A, b);
  for (int round = 0; round < 2; ++round) {
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) {
      long double acc = b[i];
      for (int j = 0; j < n; ++j) acc -= static_cast<long double>(A[i][j]) * x[j];
      r[i] = static_cast<double>(acc);
    }
    std::vector<double> dx = solve_linear(A, r);
    for (int i = 0; i < n; ++i) x[i] += dx[i];
  }
  return x;
}

int rational_rank(std::vector<std::vector<Rational>> A) {
  if (A.empty()) return 0;
  const int m = static_cast<int>(A.size());
  const int n = static_cast<int>(A[0].size());
  int rank = 0;
  int row = 0;
  for (int col = 0; col < n && row < m; ++col) {
    int pivot = -1;
    for (int i = row; i < m; ++i)
      if (!is_zero(A[i][col])) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(A[row], A[pivot]);
    for (int i = row + 1; i < m; ++i) {
      if (is_zero(A[i][col])) continue;
      Rational f = A[i][col] / A[row][col];
      for (int j = col; j < n; ++j) A[i][j] -= f * A[row][j];
    }
    ++row;
    ++rank;
  }
  return rank;
}

}  // namespace moran
