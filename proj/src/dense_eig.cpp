#include "moran/dense_eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "moran/errors.hpp"

namespace moran {

namespace {

inline double sign_of(double a, double b) { return b >= 0.0 ? std::fabs(a) : -std::fabs(a); }

// Diagonal similarity scaling so row and column norms balance (Parlett-Reinsch).
void balance(std::vector<double>& a, int n) {
  const double radix = 2.0, sqrdx = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (int i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i) {
          c += std::fabs(a[j * n + i]);
          r += std::fabs(a[i * n + j]);
        }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0, s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        for (int j = 0; j < n; ++j) a[i * n + j] *= g;
        for (int j = 0; j < n; ++j) a[j * n + i] *= f;
      }
    }
  }
}

// Reduction to upper Hessenberg form by stabilized elementary similarity
// transformations.
void hessenberg(std::vector<double>& a, int n) {
  for (int m = 1; m < n - 1; ++m) {
    double x = 0.0;
    int i = m;
    for (int j = m; j < n; ++j) {
      if (std::fabs(a[j * n + m - 1]) > std::fabs(x)) {
        x = a[j * n + m - 1];
        i = j;
      }
    }
    if (i != m) {
      for (int j = m - 1; j < n; ++j) std::swap(a[i * n + j], a[m * n + j]);
      for (int j = 0; j < n; ++j) std::swap(a[j * n + i], a[j * n + m]);
    }
    if (x != 0.0) {
      for (i = m + 1; i < n; ++i) {
        double y = a[i * n + m - 1];
        if (y != 0.0) {
          y /= x;
          a[i * n + m - 1] = y;
          for (int j = m; j < n; ++j) a[i * n + j] -= y * a[m * n + j];
          for (int j = 0; j < n; ++j) a[j * n + m] += y * a[j * n + i];
        }
      }
    }
  }
  for (int r = 2; r < n; ++r)
    for (int c = 0; c < r - 1; ++c) a[r * n + c] = 0.0;
}

// Francis double-shift QR on an upper Hessenberg matrix; eigenvalues only.
std::vector<std::complex<double>> hqr(std::vector<double>& a, int n) {
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<std::complex<double>> wri(n);
  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::fabs(a[i * n + j]);
  if (anorm == 0.0) return wri;

  int nn = n - 1;
  double t = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l;
    do {
      for (l = nn; l > 0; --l) {
        double s = std::fabs(a[(l - 1) * n + (l - 1)]) + std::fabs(a[l * n + l]);
        if (s == 0.0) s = anorm;
        if (std::fabs(a[l * n + l - 1]) <= eps * s) {
          a[l * n + l - 1] = 0.0;
          break;
        }
      }
      double x = a[nn * n + nn];
      if (l == nn) {
        wri[nn--] = x + t;
      } else {
        double y = a[(nn - 1) * n + (nn - 1)];
        double w = a[nn * n + nn - 1] * a[(nn - 1) * n + nn];
        if (l == nn - 1) {
          double p = 0.5 * (y - x);
          double q = p * p + w;
          double z = std::sqrt(std::fabs(q));
          x += t;
          if (q >= 0.0) {
            z = p + sign_of(z, p);
            wri[nn - 1] = wri[nn] = x + z;
            if (z != 0.0) wri[nn] = x - w / z;
          } else {
            wri[nn] = std::complex<double>(x + p, -z);
            wri[nn - 1] = std::conj(wri[nn]);
          }
          nn -= 2;
        } else {
          if (its == 60) throw numeric_error("dense_eigenvalues: QR iteration failed to converge");
          if (its % 10 == 0 && its > 0) {
            // exceptional shift
            t += x;
            for (int i = 0; i <= nn; ++i) a[i * n + i] -= x;
            double s = std::fabs(a[nn * n + nn - 1]) + std::fabs(a[(nn - 1) * n + nn - 2]);
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m;
          double p = 0.0, q = 0.0, r = 0.0;
          for (m = nn - 2; m >= l; --m) {
            double z = a[m * n + m];
            double rr = x - z;
            double ss = y - z;
            p = (rr * ss - w) / a[(m + 1) * n + m] + a[m * n + m + 1];
            q = a[(m + 1) * n + (m + 1)] - z - rr - ss;
            r = a[(m + 2) * n + (m + 1)];
            double s = std::fabs(p) + std::fabs(q) + std::fabs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            double u = std::fabs(a[m * n + m - 1]) * (std::fabs(q) + std::fabs(r));
            double v = std::fabs(p) * (std::fabs(a[(m - 1) * n + (m - 1)]) + std::fabs(z) +
                                       std::fabs(a[(m + 1) * n + (m + 1)]));
            if (u <= eps * v) break;
          }
          for (int i = m; i < nn - 1; ++i) {
            a[(i + 2) * n + i] = 0.0;
            if (i != m) a[(i + 2) * n + i - 1] = 0.0;
          }
          for (int k = m; k < nn; ++k) {
            if (k != m) {
              p = a[k * n + k - 1];
              q = a[(k + 1) * n + k - 1];
              r = 0.0;
              if (k + 1 != nn) r = a[(k + 2) * n + k - 1];
              x = std::fabs(p) + std::fabs(q) + std::fabs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
            if (s == 0.0) continue;
            if (k == m) {
              if (l != m) a[k * n + k - 1] = -a[k * n + k - 1];
            } else {
              a[k * n + k - 1] = -s * x;
            }
            p += s;
            x = p / s;
            y = q / s;
            double z = r / s;
            q /= p;
            r /= p;
            for (int j = k; j <= nn; ++j) {
              double pp = a[k * n + j] + q * a[(k + 1) * n + j];
              if (k + 1 != nn) {
                pp += r * a[(k + 2) * n + j];
                a[(k + 2) * n + j] -= pp * z;
              }
              a[(k + 1) * n + j] -= pp * y;
              a[k * n + j] -= pp * x;
            }
            int mmin = nn < k + 3 ? nn : k + 3;
            for (int i = l; i <= mmin; ++i) {
              double pp = x * a[i * n + k] + y * a[i * n + k + 1];
              if (k + 1 != nn) {
                pp += z * a[i * n + k + 2];
                a[i * n + k + 2] -= pp * r;
              }
              a[i * n + k + 1] -= pp * q;
              a[i * n + k] -= pp;
            }
          }
        }
      }
    } while (l + 1 < nn);
  }
  return wri;
}

}  // namespace

std::vector<std::complex<double>> dense_eigenvalues(std::vector<double> a, int n) {
  if (n < 0 || static_cast<std::size_t>(n) * n != a.size())
    throw argument_error("dense_eigenvalues: shape mismatch");
  if (n == 0) return {};
  if (n == 1) return {std::complex<double>(a[0], 0.0)};
  balance(a, n);
  hessenberg(a, n);
  return hqr(a, n);
}

std::vector<std::complex<double>> dense_eigenvalues(const std::vector<std::vector<double>>& a) {
  const int n = static_cast<int>(a.size());
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& row : a) {
    if (static_cast<int>(row.size()) != n) throw argument_error("dense_eigenvalues: not square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return dense_eigenvalues(std::move(flat), n);
}

}  // namespace moran
