#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "moran/field.hpp"
#include "moran/generator.hpp"
#include "moran/linalg.hpp"
#include "moran/simplex.hpp"

namespace moran {

/// Probability measure on E_{K,N} as a vector indexed by state rank.
template <class F>
struct SimplexMeasure {
  std::shared_ptr<const StateSpace> space;
  std::vector<F> probs;

  const F& at(const Composition& eta) const { return probs[space->rank(eta)]; }

  void validate(double tol = 1e-12) const {
    F total = field_traits<F>::from_long(0);
    for (const F& x : probs) {
      if (x < field_traits<F>::from_long(0)) throw validation_error("measure: negative mass");
      total += x;
    }
    if constexpr (field_traits<F>::exact) {
      if (!(total == field_traits<F>::from_long(1)))
        throw validation_error("measure: mass must sum to 1");
    } else {
      if (std::fabs(to_double(total) - 1.0) > tol)
        throw validation_error("measure: mass must sum to 1");
    }
  }
};

/// Multinomial pmf M(eta | N, q) with |q| = 1.
template <class F>
F multinomial_pmf(const Composition& eta, int N, const std::vector<F>& q) {
  if (eta.size() != q.size()) throw argument_error("multinomial_pmf: dimension mismatch");
  F qs = field_traits<F>::from_long(0);
  for (const F& v : q) {
    if (v < field_traits<F>::from_long(0)) throw argument_error("multinomial_pmf: negative weight");
    qs += v;
  }
  if constexpr (field_traits<F>::exact) {
    if (!(qs == field_traits<F>::from_long(1)))
      throw argument_error("multinomial_pmf: weights must sum to 1");
  } else {
    if (std::fabs(to_double(qs) - 1.0) > 1e-12)
      throw argument_error("multinomial_pmf: weights must sum to 1");
  }
  F acc = field_traits<F>::from_rational(Rational(multinomial_coeff(N, eta)));
  for (std::size_t k = 0; k < q.size(); ++k) acc *= pow_int(q[k], eta[k]);
  return acc;
}

/// Dirichlet-multinomial pmf DM(eta | N, alpha) with alpha > 0.
template <class F>
F dirichlet_multinomial_pmf(const Composition& eta, int N, const std::vector<F>& alpha) {
  if (eta.size() != alpha.size()) throw argument_error("dirichlet_multinomial_pmf: dimension mismatch");
  F atot = field_traits<F>::from_long(0);
  for (const F& a : alpha) {
    if (!(a > field_traits<F>::from_long(0)))
      throw argument_error("dirichlet_multinomial_pmf: alpha must be positive");
    atot += a;
  }
  F acc = field_traits<F>::from_rational(Rational(multinomial_coeff(N, eta))) / rising(atot, N);
  for (std::size_t k = 0; k < alpha.size(); ++k) acc *= rising(alpha[k], eta[k]);
  return acc;
}

template <class F>
SimplexMeasure<F> multinomial_measure(std::shared_ptr<const StateSpace> space,
                                      const std::vector<F>& q) {
  SimplexMeasure<F> m;
  m.space = space;
  m.probs.reserve(space->size());
  for (std::int64_t r = 0; r < space->size(); ++r)
    m.probs.push_back(multinomial_pmf(space->state(r), space->N(), q));
  return m;
}

template <class F>
SimplexMeasure<F> dirichlet_multinomial_measure(std::shared_ptr<const StateSpace> space,
                                                const std::vector<F>& alpha) {
  SimplexMeasure<F> m;
  m.space = space;
  m.probs.reserve(space->size());
  for (std::int64_t r = 0; r < space->size(); ++r)
    m.probs.push_back(dirichlet_multinomial_pmf(space->state(r), space->N(), alpha));
  return m;
}

/**
 * Stationary law of the parent-independent model: DM(. | N, N mu / p) for
 * p > 0, M(. | N, mu/|mu|) for p = 0.
 */
template <class F>
SimplexMeasure<F> stationary_nu(std::shared_ptr<const StateSpace> space, const std::vector<F>& mu,
                                const F& p) {
  if (static_cast<int>(mu.size()) != space->K())
    throw argument_error("stationary_nu: |mu| must equal K");
  for (const F& m : mu)
    if (!(m > field_traits<F>::from_long(0))) throw argument_error("stationary_nu: mu must be positive");
  if (p < field_traits<F>::from_long(0)) throw argument_error("stationary_nu: p must be >= 0");
  const int N = space->N();
  if (p > field_traits<F>::from_long(0)) {
    std::vector<F> alpha(mu.size());
    for (std::size_t k = 0; k < mu.size(); ++k)
      alpha[k] = field_traits<F>::from_long(N) * mu[k] / p;
    return dirichlet_multinomial_measure(std::move(space), alpha);
  }
  F tot = field_traits<F>::from_long(0);
  for (const F& m : mu) tot += m;
  std::vector<F> q(mu.size());
  for (std::size_t k = 0; k < mu.size(); ++k) q[k] = mu[k] / tot;
  return multinomial_measure(std::move(space), q);
}

/**
 * Weighted Dirichlet-compound multinomial: unnormalised mass
 * C(N, eta) prod_k p_k^{eta(k)} (N mu_k / p_k)_(eta(k)), normalised by direct
 * summation over E_{K,N}.  Stationary (and reversible) for the
 * selection-at-birth generator.
 */
template <class F>
SimplexMeasure<F> wdm_measure(std::shared_ptr<const StateSpace> space, const std::vector<F>& mu,
                              const std::vector<F>& pvec) {
  if (static_cast<int>(mu.size()) != space->K() || pvec.size() != mu.size())
    throw argument_error("wdm_measure: dimension mismatch");
  for (std::size_t k = 0; k < mu.size(); ++k)
    if (!(mu[k] > field_traits<F>::from_long(0)) || !(pvec[k] > field_traits<F>::from_long(0)))
      throw argument_error("wdm_measure: parameters must be positive");
  const int N = space->N();
  std::vector<F> alpha(mu.size());
  for (std::size_t k = 0; k < mu.size(); ++k)
    alpha[k] = field_traits<F>::from_long(N) * mu[k] / pvec[k];

  SimplexMeasure<F> m;
  m.space = space;
  m.probs.reserve(space->size());
  F Z = field_traits<F>::from_long(0);
  for (std::int64_t r = 0; r < space->size(); ++r) {
    const Composition& eta = space->state(r);
    F u = field_traits<F>::from_rational(Rational(multinomial_coeff(N, eta)));
    for (std::size_t k = 0; k < mu.size(); ++k)
      u *= pow_int(pvec[k], eta[k]) * rising(alpha[k], eta[k]);
    m.probs.push_back(u);
    Z += u;
  }
  for (F& x : m.probs) x /= Z;
  return m;
}

/// wdm normalisation constant (the direct sum of unnormalised masses).
template <class F>
F wdm_normalizer(const StateSpace& space, const std::vector<F>& mu, const std::vector<F>& pvec) {
  const int N = space.N();
  std::vector<F> alpha(mu.size());
  for (std::size_t k = 0; k < mu.size(); ++k)
    alpha[k] = field_traits<F>::from_long(N) * mu[k] / pvec[k];
  F Z = field_traits<F>::from_long(0);
  for (std::int64_t r = 0; r < space.size(); ++r) {
    const Composition& eta = space.state(r);
    F u = field_traits<F>::from_rational(Rational(multinomial_coeff(N, eta)));
    for (std::size_t k = 0; k < mu.size(); ++k)
      u *= pow_int(pvec[k], eta[k]) * rising(alpha[k], eta[k]);
    Z += u;
  }
  return Z;
}

/// Stationary vector of an irreducible generator: solves pi G = 0, sum pi = 1.
template <class F>
SimplexMeasure<F> stationary_of_generator(const GeneratorMatrix<F>& G) {
  const std::int64_t n = G.dim();
  auto dense = G.dense();
  // Transpose, then replace the last equation by the normalisation.
  std::vector<std::vector<F>> A(n, std::vector<F>(n));
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < n; ++j) A[i][j] = dense[j][i];
  std::vector<F> b(n, field_traits<F>::from_long(0));
  for (std::int64_t j = 0; j < n; ++j) A[n - 1][j] = field_traits<F>::from_long(1);
  b[n - 1] = field_traits<F>::from_long(1);

  SimplexMeasure<F> m;
  m.space = G.space;
  if constexpr (field_traits<F>::exact) {
    m.probs = solve_linear(std::move(A), std::move(b));
  } else {
    m.probs = solve_linear_refined(A, b);
  }
  return m;
}

/// Left-stationarity residual max_xi |(pi G)(xi)|, for diagnostics.
template <class F>
F stationarity_residual(const GeneratorMatrix<F>& G, const SimplexMeasure<F>& pi) {
  auto v = G.apply_left(pi.probs);
  F worst = field_traits<F>::from_long(0);
  for (const F& x : v) {
    F a = field_traits<F>::abs(x);
    if (a > worst) worst = a;
  }
  return worst;
}

}  // namespace moran
