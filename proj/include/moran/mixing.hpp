#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "moran/generator.hpp"
#include "moran/measures.hpp"
#include "moran/mutation.hpp"
#include "moran/simplex.hpp"

namespace moran {

enum class Metric { TV, Chi2 };
enum class Provenance { Uniformization, Spectral, ClosedForm, Empirical };

/// Strictly increasing positive time points.
using TimeGrid = std::vector<double>;

struct MixingCurve {
  TimeGrid grid;
  std::vector<double> values;
  Metric metric = Metric::TV;
  Provenance provenance = Provenance::Uniformization;
};

/// Total variation distance (half L1) between measures on the same space.
template <class F>
F tv(const SimplexMeasure<F>& m1, const SimplexMeasure<F>& m2) {
  if (m1.space->size() != m2.space->size()) throw argument_error("tv: space mismatch");
  F acc = field_traits<F>::from_long(0);
  for (std::int64_t r = 0; r < m1.space->size(); ++r)
    acc += field_traits<F>::abs(m1.probs[r] - m2.probs[r]);
  return acc / field_traits<F>::from_long(2);
}

/// Chi-square divergence of m2 with respect to the reference m1 (> 0 everywhere).
template <class F>
F chi2(const SimplexMeasure<F>& m2, const SimplexMeasure<F>& m1) {
  if (m1.space->size() != m2.space->size()) throw argument_error("chi2: space mismatch");
  F acc = field_traits<F>::from_long(0);
  for (std::int64_t r = 0; r < m1.space->size(); ++r) {
    if (!(m1.probs[r] > field_traits<F>::from_long(0)))
      throw argument_error("chi2: reference measure must be strictly positive");
    F d = m2.probs[r] - m1.probs[r];
    acc += d * d / m1.probs[r];
  }
  return acc;
}

// --- transient analysis -------------------------------------------------------

/**
 * v0 e^{tG} by uniformization: P = I + G/Lambda with Lambda the maximal exit
 * rate, Poisson(Lambda t) mixture of v0 P^n truncated once the remaining tail
 * mass drops below `tail`; the result is renormalised to total mass 1.
 */
SimplexMeasure<double> transition_measure(const GeneratorMatrix<double>& G, double t,
                                          const SimplexMeasure<double>& v0, double tail = 1e-13);

/// delta_start e^{tG} by uniformization.
SimplexMeasure<double> transition_row(const GeneratorMatrix<double>& G, double t,
                                      std::int64_t start, double tail = 1e-13);

/**
 * Spectral-decomposition transition kernels for the parent-independent model:
 * P_t(eta, xi) = nu(xi) (1 + sum_L e^{lambda_{L,p} t} h_L(eta, xi)).
 * Construction precomputes the orthonormal polynomial table over the space.
 */
class SpectralKernel {
 public:
  SpectralKernel(std::shared_ptr<const StateSpace> space, std::vector<double> mu, double p);

  /// P_t(eta, xi) for single states.
  double transition(std::int64_t eta, std::int64_t xi, double t) const;

  /// Full row delta_eta e^{tL}.
  SimplexMeasure<double> row(std::int64_t eta, double t) const;

  /// Eigenvalue lambda_{L,p} = -|mu| L - (p/N) L (L-1).
  double eigenvalue(int L) const;

  const SimplexMeasure<double>& stationary() const { return nu_; }

 private:
  std::shared_ptr<const StateSpace> space_;
  std::vector<double> mu_;
  double p_;
  double mu_total_;
  SimplexMeasure<double> nu_;
  std::vector<int> degree_;                  // |eta| per polynomial index
  std::vector<double> inv_norm_;             // 1/d^2 per polynomial index
  std::vector<std::vector<double>> values_;  // values_[idx][state]
};

/// Single spectral transition value; model must be parent-independent.
double transition_spectral(const std::shared_ptr<const StateSpace>& space,
                           const Composition& from, const Composition& to, double t,
                           const std::vector<double>& mu, double p);

// --- closed forms --------------------------------------------------------------

/// chi^2 distance to stationarity from N e_k at time t, closed form.
double chi2_closed_form(double t, int k, int N, const std::vector<double>& mu, double p);

/// Cutoff constant K_{k,p} = |mu| (|mu| - mu_k) / (mu_k (|mu| + p)).
double K_const(int k, const std::vector<double>& mu, double p);

/// Limit chi-square profile exp{K_{k,p} e^{-c}} - 1.
double cutoff_profile_chi2(double c, int k, const std::vector<double>& mu, double p);

/// Cutoff time (ln N + c) / (2 |mu|).
double t_cutoff(std::int64_t N, double c, const std::vector<double>& mu);

/// Standard normal CDF via the complementary error function.
double normal_cdf(double x);

/// Limit total-variation profile 2 Phi(sqrt(K_{k,0} e^{-c}) / 2) - 1 (p = 0).
double cutoff_profile_tv_p0(double c, int k, const std::vector<double>& mu);

/// Exact total variation between Bin(N, psi1) and Bin(N, psi2) by summation.
double binomial_tv(std::int64_t N, double psi1, double psi2);

/// TV to stationarity from N e_k for the p = 0 model via the binomial reduction.
double tv_from_nek_p0(std::int64_t N, const std::vector<double>& mu, int k, double t);

/// Law at time t from N e_k for the p = 0 model: multinomial with drifting weights.
SimplexMeasure<double> law_at_time_p0(std::shared_ptr<const StateSpace> space, double t, int k,
                                      const std::vector<double>& mu);

// --- bounds and rate estimation -------------------------------------------------

struct LowerBound {
  double bound;  // may be <= 0, then vacuous
  double time;   // t_{N,c} = (ln N - c) / (2 lambda)
  double kappa;  // 8 (2 lambda + ||Q||_inf)
};

/**
 * Wilson-method lower bound on TV distance from N e_k at t_{N,c}:
 * 1 - kappa (||V||_inf / |v_k|) e^{-c}, where Q V = -lambda V.
 */
LowerBound tv_lower_bound(double c, int k, const MutationMatrix<double>& Q, double lambda,
                          const std::vector<double>& V, std::int64_t N);

/// The lower-bound constant for the parent-independent matrix: 32 |mu|.
double kappa_parent_independent(const std::vector<double>& mu);

/// Maximal TV distance to stationarity at time t: half the max row L1 deviation.
double max_tv(const GeneratorMatrix<double>& G, double t);

struct DecayFit {
  double rate;   // rho
  double power;  // s - 1
};

/**
 * Fits log d(t) ~ const + power * log t - rate * t on the last 60% of the
 * curve.  Needs at least 6 points.
 */
DecayFit estimate_decay_rate(const MixingCurve& curve);

// --- reversibility diagnostics ---------------------------------------------------

/// Carre-du-champ operator: (Gamma f)(eta) = (G f^2)(eta) - 2 f(eta) (G f)(eta).
template <class F>
std::vector<F> carre_du_champ(const GeneratorMatrix<F>& G, const std::vector<F>& f) {
  if (static_cast<std::int64_t>(f.size()) != G.dim())
    throw argument_error("carre_du_champ: dimension mismatch");
  std::vector<F> f2(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) f2[i] = f[i] * f[i];
  auto gf2 = G.apply(f2);
  auto gf = G.apply(f);
  std::vector<F> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    out[i] = gf2[i] - field_traits<F>::from_long(2) * f[i] * gf[i];
  return out;
}

/// Detailed balance pi(eta) G[eta,xi] = pi(xi) G[xi,eta] on all nonzero pairs.
template <class F>
bool check_detailed_balance(const GeneratorMatrix<F>& G, const SimplexMeasure<F>& pi,
                            double tol = 1e-12) {
  for (std::int64_t r = 0; r < G.dim(); ++r) {
    if (!(pi.probs[r] > field_traits<F>::from_long(0)))
      throw argument_error("check_detailed_balance: measure must be strictly positive");
  }
  for (std::int64_t r = 0; r < G.dim(); ++r) {
    bool ok = true;
    G.for_row(r, [&](std::int64_t c, const F& rate) {
      if (c == r) return;
      F lhs = pi.probs[r] * rate;
      F rhs = pi.probs[c] * G.entry(c, r);
      if constexpr (field_traits<F>::exact) {
        if (!(lhs == rhs)) ok = false;
      } else {
        double scale = std::max({1e-300, std::fabs(to_double(lhs)), std::fabs(to_double(rhs))});
        if (std::fabs(to_double(lhs) - to_double(rhs)) > tol * scale) ok = false;
      }
    });
    if (!ok) return false;
  }
  return true;
}

struct CycleCheckResult {
  bool reversible = true;
  std::vector<std::int64_t> witness;  // state ranks of a violating cycle, empty if none
};

/**
 * Kolmogorov cycle criterion over all simple cycles of length <= max_len in
 * the positive-rate digraph: clockwise and counterclockwise rate products must
 * agree.  Returns a violating cycle when one exists.
 */
template <class F>
CycleCheckResult kolmogorov_cycle_check(const GeneratorMatrix<F>& G, int max_len = 4) {
  if (max_len < 2) throw argument_error("kolmogorov_cycle_check: max_len must be >= 2");
  const std::int64_t n = G.dim();
  std::vector<std::vector<std::int64_t>> adj(n);
  for (std::int64_t r = 0; r < n; ++r)
    G.for_row(r, [&](std::int64_t c, const F& rate) {
      if (c != r && rate > field_traits<F>::from_long(0)) adj[r].push_back(c);
    });

  auto positive = [&](std::int64_t u, std::int64_t v) {
    return G.entry(u, v) > field_traits<F>::from_long(0);
  };

  // Zero-pattern symmetry first: a one-way edge breaks reversibility outright.
  for (std::int64_t u = 0; u < n; ++u)
    for (std::int64_t v : adj[u])
      if (!positive(v, u)) return CycleCheckResult{false, {u, v}};

  auto products_match = [&](const std::vector<std::int64_t>& cyc) {
    F fwd = field_traits<F>::from_long(1);
    F bwd = field_traits<F>::from_long(1);
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      std::int64_t a = cyc[i];
      std::int64_t b = cyc[(i + 1) % cyc.size()];
      fwd *= G.entry(a, b);
      bwd *= G.entry(b, a);
    }
    if constexpr (field_traits<F>::exact) {
      return fwd == bwd;
    } else {
      double x = to_double(fwd), y = to_double(bwd);
      return std::fabs(x - y) <= 1e-9 * std::max({1e-300, std::fabs(x), std::fabs(y)});
    }
  };

  // Simple cycles with the smallest rank first and direction deduplicated.
  std::vector<std::int64_t> path;
  CycleCheckResult result;
  std::function<bool(std::int64_t)> dfs = [&](std::int64_t u) -> bool {
    for (std::int64_t v : adj[u]) {
      if (v == path.front()) {
        if (path.size() >= 3 && path[1] < path.back() && !products_match(path)) {
          result = CycleCheckResult{false, path};
          return true;
        }
        continue;
      }
      if (v <= path.front()) continue;
      if (static_cast<int>(path.size()) >= max_len) continue;
      bool seen = false;
      for (std::int64_t w : path)
        if (w == v) {
          seen = true;
          break;
        }
      if (seen) continue;
      path.push_back(v);
      if (dfs(v)) return true;
      path.pop_back();
    }
    return false;
  };
  for (std::int64_t s = 0; s < n; ++s) {
    path.assign(1, s);
    if (dfs(s)) return result;
  }
  return result;
}

/**
 * The two rate products around the 4-cycle
 * N e_i -> N e_i - e_i + e_j -> N e_i - 2 e_i + e_j + e_k -> N e_i - e_i + e_k -> N e_i.
 * Their inequality is an explicit irreversibility witness.
 */
template <class F>
std::pair<F, F> four_cycle_products(const GeneratorMatrix<F>& G, int i, int j, int k) {
  const auto& space = *G.space;
  const int N = space.N();
  if (N < 2) throw argument_error("four_cycle_products: N must be >= 2");
  Composition e1(space.K(), 0);
  e1[i] = N;
  Composition e2 = e1;
  e2[i] -= 1;
  e2[j] += 1;
  Composition e3 = e2;
  e3[i] -= 1;
  e3[k] += 1;
  Composition e4 = e1;
  e4[i] -= 1;
  e4[k] += 1;
  std::vector<std::int64_t> cyc{space.rank(e1), space.rank(e2), space.rank(e3), space.rank(e4)};
  F fwd = field_traits<F>::from_long(1);
  F bwd = field_traits<F>::from_long(1);
  for (std::size_t s = 0; s < 4; ++s) {
    fwd *= G.entry(cyc[s], cyc[(s + 1) % 4]);
    bwd *= G.entry(cyc[(s + 1) % 4], cyc[s]);
  }
  return {fwd, bwd};
}

}  // namespace moran
