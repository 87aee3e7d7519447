#include "moran/charpoly.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "moran/dense_eig.hpp"
#include "moran/linalg.hpp"

namespace moran {

std::vector<Rational> charpoly(const std::vector<std::vector<Rational>>& A) {
  const int n = static_cast<int>(A.size());
  for (const auto& row : A)
    if (static_cast<int>(row.size()) != n) throw argument_error("charpoly: not square");

  // Faddeev-LeVerrier: M_1 = A, c_k = -tr(A M_k)/k, M_{k+1} = A M_k + c_k I.
  std::vector<Rational> c(n + 1, rat(0));
  c[0] = rat(1);
  std::vector<std::vector<Rational>> M(n, std::vector<Rational>(n, rat(0)));
  for (int i = 0; i < n; ++i) M[i][i] = rat(1);
  for (int k = 1; k <= n; ++k) {
    // M <- A * M
    std::vector<std::vector<Rational>> next(n, std::vector<Rational>(n, rat(0)));
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        if (is_zero(A[i][l])) continue;
        for (int j = 0; j < n; ++j) next[i][j] += A[i][l] * M[l][j];
      }
    M = std::move(next);
    Rational tr = rat(0);
    for (int i = 0; i < n; ++i) tr += M[i][i];
    c[k] = -tr / rat(k);
    for (int i = 0; i < n; ++i) M[i][i] += c[k];
  }
  return c;
}

bool poly_has_exact_roots(const std::vector<Rational>& poly, const std::vector<Rational>& roots) {
  const int degree = static_cast<int>(poly.size()) - 1;
  if (static_cast<int>(roots.size()) != degree) return false;
  std::vector<Rational> cur = poly;
  for (const Rational& r : roots) {
    // Synthetic division of cur by (x - r).
    std::vector<Rational> quo(cur.size() - 1);
    Rational carry = rat(0);
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      carry = cur[i] + carry * r;
      quo[i] = carry;
    }
    Rational remainder = cur.back() + carry * r;
    if (!is_zero(remainder)) return false;
    cur = std::move(quo);
  }
  return true;
}

bool verify_spectrum_exact(const std::vector<std::vector<Rational>>& A,
                           const std::vector<Rational>& roots) {
  return poly_has_exact_roots(charpoly(A), roots);
}

Rational rationalize(double x, unsigned long max_den) {
  if (!std::isfinite(x)) throw argument_error("rationalize: non-finite value");
  bool negative = x < 0;
  double v = std::fabs(x);
  // Continued-fraction convergents p/q with q <= max_den.
  unsigned long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int iter = 0; iter < 64; ++iter) {
    double fl = std::floor(frac);
    if (fl > 1e18) break;
    unsigned long a = static_cast<unsigned long>(fl);
    unsigned long p2 = a * p1 + p0;
    unsigned long q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double rem = frac - fl;
    if (rem < 1e-15 * std::max(1.0, frac)) break;
    frac = 1.0 / rem;
  }
  if (q1 == 0) throw argument_error("rationalize: no convergent found");
  Rational r(static_cast<long>(p1), static_cast<long>(q1));
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

std::optional<std::vector<Rational>> exact_rational_spectrum(
    const std::vector<std::vector<Rational>>& A) {
  const int n = static_cast<int>(A.size());
  std::vector<std::vector<double>> Ad(n, std::vector<double>(n));
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Ad[i][j] = to_double(A[i][j]);
      scale = std::max(scale, std::fabs(Ad[i][j]));
    }
  if (scale == 0.0) return std::vector<Rational>(n, rat(0));

  auto eig = dense_eigenvalues(Ad);
  std::vector<Rational> roots;
  roots.reserve(n);
  for (const auto& z : eig) {
    // Defective real eigenvalues scatter into small complex clusters, so only
    // reject plainly complex roots.
    if (std::fabs(z.imag()) > 1e-3 * std::max(1.0, scale)) return std::nullopt;
    Rational candidate;
    try {
      candidate = rationalize(z.real());
    } catch (const error&) {
      return std::nullopt;
    }
    roots.push_back(candidate);
  }
  std::sort(roots.begin(), roots.end());

  auto poly = charpoly(A);
  if (poly_has_exact_roots(poly, roots)) return roots;

  // Defective roots scatter; retry with each cluster snapped to the
  // rationalized cluster mean.
  std::vector<double> vals(roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) vals[i] = to_double(roots[i]);
  std::vector<Rational> clustered;
  const double tol = 1e-3 * std::max(1.0, scale);
  std::size_t i = 0;
  while (i < vals.size()) {
    std::size_t j = i + 1;
    while (j < vals.size() && vals[j] - vals[j - 1] < tol) ++j;
    double mean = 0.0;
    for (std::size_t k = i; k < j; ++k) mean += vals[k];
    mean /= static_cast<double>(j - i);
    Rational merged;
    try {
      merged = rationalize(mean, 10000);
    } catch (const error&) {
      return std::nullopt;
    }
    for (std::size_t k = i; k < j; ++k) clustered.push_back(merged);
    i = j;
  }
  std::sort(clustered.begin(), clustered.end());
  if (poly_has_exact_roots(poly, clustered)) return clustered;
  return std::nullopt;
}

int geometric_multiplicity(const std::vector<std::vector<Rational>>& A, const Rational& lambda) {
  const int n = static_cast<int>(A.size());
  auto B = A;
  for (int i = 0; i < n; ++i) B[i][i] -= lambda;
  return n - rational_rank(std::move(B));
}

}  // namespace moran
