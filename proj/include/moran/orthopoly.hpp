#pragma once

#include <vector>

#include "moran/field.hpp"
#include "moran/simplex.hpp"

namespace moran {

/**
 * Univariate Hahn polynomial H_n(x; M, beta, gamma), the terminating
 * hypergeometric sum
 *   sum_{j=0}^{min(n,x)} (-n)_(j) (n+beta+gamma-1)_(j) (-x)_(j)
 *                        / (beta_(j) (-M)_(j) j!).
 * Requires 0 <= x <= M and beta > 0; truncation at min(n, x) skips the terms
 * already annihilated by (-x)_(j).
 */
template <class F>
F hahn_uni(int n, int x, int M, const F& beta, const F& gamma) {
  if (n < 0 || x < 0) throw argument_error("hahn_uni: n and x must be nonnegative");
  if (x > M) throw argument_error("hahn_uni: x must not exceed M");
  if (!(beta > field_traits<F>::from_long(0))) throw argument_error("hahn_uni: beta must be positive");
  F acc = field_traits<F>::from_long(0);
  F term = field_traits<F>::from_long(1);
  const int jmax = std::min(n, x);
  for (int j = 0; j <= jmax; ++j) {
    acc += term;
    if (j == jmax) break;
    // ratio of consecutive terms
    F num = (field_traits<F>::from_long(j) - field_traits<F>::from_long(n)) *
            (field_traits<F>::from_long(n + j - 1) + beta + gamma) *
            (field_traits<F>::from_long(j) - field_traits<F>::from_long(x));
    F den = (beta + field_traits<F>::from_long(j)) *
            (field_traits<F>::from_long(j) - field_traits<F>::from_long(M)) *
            field_traits<F>::from_long(j + 1);
    term *= num / den;
  }
  return acc;
}

/**
 * (-M)_(n) * H_n(x; M, beta, gamma) as a polynomial in M and x: valid even
 * when x > M, where the factor (-M+j)_(n-j) keeps every term finite.  This is
 * the form entering the multivariate product.
 */
template <class F>
F hahn_scaled(int n, int x, int M, const F& beta, const F& gamma) {
  if (n < 0 || x < 0) throw argument_error("hahn_scaled: n and x must be nonnegative");
  if (!(beta > field_traits<F>::from_long(0)))
    throw argument_error("hahn_scaled: beta must be positive");
  F acc = field_traits<F>::from_long(0);
  const F mM = field_traits<F>::from_long(-M);
  const int jmax = std::min(n, x);
  for (int j = 0; j <= jmax; ++j) {
    F term = rising(field_traits<F>::from_long(-n), j) *
             rising(field_traits<F>::from_long(n - 1) + beta + gamma, j) *
             rising(field_traits<F>::from_long(-x), j) *
             rising(mM + field_traits<F>::from_long(j), n - j) /
             (rising(beta, j) * rising(field_traits<F>::from_long(1), j));
    acc += term;
  }
  return acc;
}

/// Univariate Krawtchouk polynomial: sum_j (-n)_(j) (-x)_(j) / ((-N)_(j) j! q^j).
template <class F>
F krawtchouk_uni(int n, int x, int N, const F& q) {
  if (n < 0 || x < 0) throw argument_error("krawtchouk_uni: n and x must be nonnegative");
  if (n > N || x > N) throw argument_error("krawtchouk_uni: n and x must not exceed N");
  if (!(q > field_traits<F>::from_long(0)) || !(q < field_traits<F>::from_long(1)))
    throw argument_error("krawtchouk_uni: q must lie in (0,1)");
  F acc = field_traits<F>::from_long(0);
  F term = field_traits<F>::from_long(1);
  const int jmax = std::min(n, x);
  for (int j = 0; j <= jmax; ++j) {
    acc += term;
    if (j == jmax) break;
    F num = (field_traits<F>::from_long(j) - field_traits<F>::from_long(n)) *
            (field_traits<F>::from_long(j) - field_traits<F>::from_long(x));
    F den = (field_traits<F>::from_long(j) - field_traits<F>::from_long(N)) *
            field_traits<F>::from_long(j + 1) * q;
    term *= num / den;
  }
  return acc;
}

/// (-M)_(n) * K_n(x; M, q), finite for all x >= 0.
template <class F>
F krawtchouk_scaled(int n, int x, int M, const F& q) {
  if (n < 0 || x < 0) throw argument_error("krawtchouk_scaled: n and x must be nonnegative");
  if (!(q > field_traits<F>::from_long(0)) || !(q < field_traits<F>::from_long(1)))
    throw argument_error("krawtchouk_scaled: q must lie in (0,1)");
  F acc = field_traits<F>::from_long(0);
  const F mM = field_traits<F>::from_long(-M);
  const int jmax = std::min(n, x);
  for (int j = 0; j <= jmax; ++j) {
    F term = rising(field_traits<F>::from_long(-n), j) * rising(field_traits<F>::from_long(-x), j) *
             rising(mM + field_traits<F>::from_long(j), n - j) /
             (rising(field_traits<F>::from_long(1), j) * pow_int(q, j));
    acc += term;
  }
  return acc;
}

namespace detail {

template <class F>
void check_poly_args(const Composition& eta, const Composition& x, int N,
                     const std::vector<F>& mu, const F& p) {
  const int K = static_cast<int>(mu.size());
  if (static_cast<int>(eta.size()) != K - 1)
    throw argument_error("polynomial index must have K-1 components");
  if (static_cast<int>(x.size()) != K) throw argument_error("evaluation point must have K components");
  long etot = 0, xtot = 0;
  for (int v : eta) {
    if (v < 0) throw argument_error("polynomial index must be nonnegative");
    etot += v;
  }
  for (int v : x) {
    if (v < 0) throw argument_error("evaluation point must be nonnegative");
    xtot += v;
  }
  if (etot > N) throw argument_error("polynomial degree |eta| must not exceed N");
  if (xtot != N) throw argument_error("evaluation point must lie in E_{K,N}");
  for (const F& m : mu)
    if (!(m > field_traits<F>::from_long(0))) throw argument_error("mu must be positive");
  if (p < field_traits<F>::from_long(0)) throw argument_error("p must be nonnegative");
}

}  // namespace detail

/**
 * The orthogonal polynomial Q_eta(x; N, mu, p) on E_{K,N}: multivariate Hahn
 * with parameter alpha = N mu / p for p > 0, multivariate Krawtchouk with
 * q = mu/|mu| for p = 0.  Right eigenfunction of the parent-independent
 * generator for the eigenvalue indexed by L = |eta|.
 */
template <class F>
F q_eta(const Composition& eta, const Composition& x, int N, const std::vector<F>& mu, const F& p) {
  detail::check_poly_args(eta, x, N, mu, p);
  const int K = static_cast<int>(mu.size());
  int L = 0;
  for (int v : eta) L += v;
  if (L == 0) return field_traits<F>::from_long(1);

  const bool hahn = p > field_traits<F>::from_long(0);
  std::vector<F> alpha(K);
  if (hahn) {
    for (int k = 0; k < K; ++k) alpha[k] = field_traits<F>::from_long(N) * mu[k] / p;
  }

  F acc = field_traits<F>::from_long(1) / falling(field_traits<F>::from_long(N), L);
  int x_prefix = 0;   // |x_{k-1}|
  int eta_tail = L;   // |eta^{k}| entering iteration k
  for (int k = 0; k < K - 1; ++k) {
    eta_tail -= eta[k];  // now |eta^{k+2}| in 1-based terms: sum of eta beyond k
    const int M = N - x_prefix - eta_tail;
    if (eta[k] > 0 || x[k] > 0) {
      if (hahn) {
        F alpha_tail = field_traits<F>::from_long(0);
        for (int j = k + 1; j < K; ++j) alpha_tail += alpha[j];
        F gamma = alpha_tail + field_traits<F>::from_long(2 * eta_tail);
        acc *= hahn_scaled(eta[k], x[k], M, alpha[k], gamma);
      } else {
        F mu_tail = field_traits<F>::from_long(0);
        for (int j = k; j < K; ++j) mu_tail += mu[j];
        F q = mu[k] / mu_tail;
        acc *= krawtchouk_scaled(eta[k], x[k], M, q);
      }
    } else {
      // eta(k) = 0 and x_k = 0: factor is 1
    }
    x_prefix += x[k];
  }
  return acc;
}

/// Squared orthogonality norm d^2_{eta,p} = E_nu[Q_eta^2].
template <class F>
F norm_sq(const Composition& eta, int N, const std::vector<F>& mu, const F& p) {
  const int K = static_cast<int>(mu.size());
  Composition probe(K, 0);
  probe[K - 1] = N;
  detail::check_poly_args(eta, probe, N, mu, p);
  int L = 0;
  for (int v : eta) L += v;
  if (L == 0) return field_traits<F>::from_long(1);

  const F one = field_traits<F>::from_long(1);
  if (p > field_traits<F>::from_long(0)) {
    std::vector<F> alpha(K);
    F alpha_total = field_traits<F>::from_long(0);
    for (int k = 0; k < K; ++k) {
      alpha[k] = field_traits<F>::from_long(N) * mu[k] / p;
      alpha_total += alpha[k];
    }
    F acc = rising(alpha_total + field_traits<F>::from_long(N), L) /
            (falling(field_traits<F>::from_long(N), L) * rising(alpha_total, 2 * L));
    int eta_tail_incl = L;  // |eta^j| including position j
    for (int j = 0; j < K - 1; ++j) {
      const int tail_incl = eta_tail_incl;            // |eta^j|
      const int tail_excl = eta_tail_incl - eta[j];   // |eta^{j+1}|
      F alpha_tail_incl = field_traits<F>::from_long(0);
      for (int i = j; i < K; ++i) alpha_tail_incl += alpha[i];
      F alpha_tail_excl = alpha_tail_incl - alpha[j];
      acc *= rising(alpha_tail_incl + field_traits<F>::from_long(tail_incl + tail_excl - 1), eta[j]) *
             rising(alpha_tail_excl + field_traits<F>::from_long(2 * tail_excl), eta[j]) *
             rising(one, eta[j]) / rising(alpha[j], eta[j]);
      eta_tail_incl = tail_excl;
    }
    return acc;
  }

  F mu_total = field_traits<F>::from_long(0);
  for (const F& m : mu) mu_total += m;
  std::vector<F> pi(K);
  for (int k = 0; k < K; ++k) pi[k] = mu[k] / mu_total;
  F acc = one / falling(field_traits<F>::from_long(N), L);
  int eta_tail_incl = L;
  for (int j = 0; j < K - 1; ++j) {
    const int tail_excl = eta_tail_incl - eta[j];
    F pi_tail_incl = field_traits<F>::from_long(0);
    for (int i = j; i < K; ++i) pi_tail_incl += pi[i];
    F pi_tail_excl = pi_tail_incl - pi[j];
    acc *= pow_int(pi_tail_incl, eta[j]) * pow_int(pi_tail_excl, eta[j]) *
           rising(one, eta[j]) / pow_int(pi[j], eta[j]);
    eta_tail_incl = tail_excl;
  }
  return acc;
}

/// Enumerates the polynomial indices of degree n: E_{K-1,n}.
std::vector<Composition> poly_indices(int K, int n);

/// Kernel polynomial by the orthonormal sum: sum_{|eta|=n} Q(x) Q(y) / d^2.
template <class F>
F kernel_sum(int n, const Composition& x, const Composition& y, int N, const std::vector<F>& mu,
             const F& p) {
  if (n < 0 || n > N) throw argument_error("kernel: need 0 <= n <= N");
  if (n == 0) return field_traits<F>::from_long(1);
  const int K = static_cast<int>(mu.size());
  F acc = field_traits<F>::from_long(0);
  for (const Composition& eta : poly_indices(K, n))
    acc += q_eta(eta, x, N, mu, p) * q_eta(eta, y, N, mu, p) / norm_sq(eta, N, mu, p);
  return acc;
}

/// Closed form for h_n(N e_k, N e_k; p), p > 0.
template <class F>
F kernel_nek_nek_pos(int n, int N, const std::vector<F>& mu, const F& p, int k) {
  if (n == 0) return field_traits<F>::from_long(1);
  const int K = static_cast<int>(mu.size());
  if (k < 0 || k >= K) throw argument_error("kernel: bad type index");
  F alpha_total = field_traits<F>::from_long(0);
  std::vector<F> alpha(K);
  for (int i = 0; i < K; ++i) {
    alpha[i] = field_traits<F>::from_long(N) * mu[i] / p;
    alpha_total += alpha[i];
  }
  F binomNn = field_traits<F>::from_rational(Rational(binomial(N, n)));
  return binomNn * (alpha_total + field_traits<F>::from_long(2 * n - 1)) *
         rising(alpha_total, n - 1) * rising(alpha_total - alpha[k], n) /
         (rising(alpha_total + field_traits<F>::from_long(N), n) * rising(alpha[k], n));
}

/// Closed form for h_n(x, N e_k; 0).
template <class F>
F kernel_x_nek_zero(int n, const Composition& x, int N, const std::vector<F>& mu, int k) {
  if (n == 0) return field_traits<F>::from_long(1);
  const int K = static_cast<int>(mu.size());
  if (k < 0 || k >= K) throw argument_error("kernel: bad type index");
  F mu_total = field_traits<F>::from_long(0);
  for (const F& m : mu) mu_total += m;
  F ratio = mu_total / mu[k];  // (mu_k/|mu|)^{-1}
  F acc = field_traits<F>::from_long(0);
  for (int m = 0; m <= n; ++m) {
    F term = field_traits<F>::from_rational(Rational(binomial(N, m) * binomial(N - m, n - m)));
    if ((n - m) % 2 == 1) term = -term;
    term *= falling(field_traits<F>::from_long(x[k]), m) /
            falling(field_traits<F>::from_long(N), m) * pow_int(ratio, m);
    acc += term;
  }
  return acc;
}

/// Closed form for h_n(N e_k, N e_k; 0) = C(N,n) (|mu|/mu_k - 1)^n.
template <class F>
F kernel_nek_nek_zero(int n, int N, const std::vector<F>& mu, int k) {
  if (n == 0) return field_traits<F>::from_long(1);
  F mu_total = field_traits<F>::from_long(0);
  for (const F& m : mu) mu_total += m;
  return field_traits<F>::from_rational(Rational(binomial(N, n))) *
         pow_int(mu_total / mu[k] - field_traits<F>::from_long(1), n);
}

/// True when x == N e_k for some k; that k is stored in *k_out.
bool is_nek(const Composition& x, int N, int* k_out);

/**
 * Kernel polynomial h_n(x, y) of nu_{N,p}: dispatches to the closed forms when
 * an argument is a vertex N e_k, otherwise evaluates the orthonormal sum.
 */
template <class F>
F kernel(int n, const Composition& x, const Composition& y, int N, const std::vector<F>& mu,
         const F& p) {
  if (n == 0) return field_traits<F>::from_long(1);
  int kx = -1, ky = -1;
  const bool xv = is_nek(x, N, &kx);
  const bool yv = is_nek(y, N, &ky);
  if (p > field_traits<F>::from_long(0)) {
    if (xv && yv && kx == ky) return kernel_nek_nek_pos(n, N, mu, p, kx);
    return kernel_sum(n, x, y, N, mu, p);
  }
  if (xv && yv && kx == ky) return kernel_nek_nek_zero(n, N, mu, kx);
  if (yv) return kernel_x_nek_zero(n, x, N, mu, ky);
  if (xv) return kernel_x_nek_zero(n, y, N, mu, kx);
  return kernel_sum(n, x, y, N, mu, p);
}

}  // namespace moran
