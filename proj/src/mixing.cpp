#include "moran/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "moran/orthopoly.hpp"

namespace moran {

namespace {

double max_exit_rate(const GeneratorMatrix<double>& G) {
  double lam = 0.0;
  for (std::int64_t r = 0; r < G.dim(); ++r) lam = std::max(lam, G.exit_rate(r));
  return lam;
}

}  // namespace

SimplexMeasure<double> transition_measure(const GeneratorMatrix<double>& G, double t,
                                          const SimplexMeasure<double>& v0, double tail) {
  if (t < 0) throw argument_error("transition_measure: t must be >= 0");
  const double lambda = max_exit_rate(G);
  SimplexMeasure<double> out;
  out.space = G.space;
  if (t == 0.0 || lambda == 0.0) {
    out.probs = v0.probs;
    return out;
  }
  // Keep e^{-Lambda t} representable; split long horizons.
  if (lambda * t > 600.0) {
    auto half = transition_measure(G, t / 2, v0, tail);
    return transition_measure(G, t / 2, half, tail);
  }

  const double lt = lambda * t;
  std::vector<double> v = v0.probs;
  std::vector<double> acc(v.size(), 0.0);
  double w = std::exp(-lt);
  double cum = w;
  for (std::size_t i = 0; i < v.size(); ++i) acc[i] = w * v[i];
  std::int64_t nmax = static_cast<std::int64_t>(lt + 60.0 * std::sqrt(lt + 1.0) + 200.0);
  for (std::int64_t n = 1; n <= nmax && 1.0 - cum > tail; ++n) {
    // v <- v P with P = I + G / Lambda
    auto gv = G.apply_left(v);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += gv[i] / lambda;
    w *= lt / static_cast<double>(n);
    cum += w;
    for (std::size_t i = 0; i < v.size(); ++i) acc[i] += w * v[i];
  }
  double total = 0.0;
  for (double x : acc) total += x;
  for (double& x : acc) x = std::max(0.0, x / total);
  out.probs = std::move(acc);
  return out;
}

SimplexMeasure<double> transition_row(const GeneratorMatrix<double>& G, double t,
                                      std::int64_t start, double tail) {
  if (start < 0 || start >= G.dim()) throw argument_error("transition_row: bad start state");
  SimplexMeasure<double> v0;
  v0.space = G.space;
  v0.probs.assign(G.dim(), 0.0);
  v0.probs[start] = 1.0;
  return transition_measure(G, t, v0, tail);
}

SpectralKernel::SpectralKernel(std::shared_ptr<const StateSpace> space, std::vector<double> mu,
                               double p)
    : space_(std::move(space)), mu_(std::move(mu)), p_(p) {
  if (static_cast<int>(mu_.size()) != space_->K())
    throw argument_error("SpectralKernel: |mu| must equal K");
  for (double m : mu_)
    if (!(m > 0)) throw unsupported_error("SpectralKernel: needs the parent-independent model");
  if (p_ < 0) throw argument_error("SpectralKernel: p must be >= 0");
  mu_total_ = 0.0;
  for (double m : mu_) mu_total_ += m;
  nu_ = stationary_nu(space_, mu_, p_);

  const int N = space_->N();
  const int K = space_->K();
  for (int L = 1; L <= N; ++L) {
    for (const Composition& eta : poly_indices(K, L)) {
      degree_.push_back(L);
      inv_norm_.push_back(1.0 / norm_sq(eta, N, mu_, p_));
      std::vector<double> vals(space_->size());
      for (std::int64_t r = 0; r < space_->size(); ++r)
        vals[r] = q_eta(eta, space_->state(r), N, mu_, p_);
      values_.push_back(std::move(vals));
    }
  }
}

double SpectralKernel::eigenvalue(int L) const {
  const int N = space_->N();
  return -mu_total_ * L - p_ / N * L * (L - 1);
}

double SpectralKernel::transition(std::int64_t eta, std::int64_t xi, double t) const {
  double sum = 1.0;
  for (std::size_t idx = 0; idx < values_.size(); ++idx) {
    sum += std::exp(eigenvalue(degree_[idx]) * t) * values_[idx][eta] * values_[idx][xi] *
           inv_norm_[idx];
  }
  return nu_.probs[xi] * sum;
}

SimplexMeasure<double> SpectralKernel::row(std::int64_t eta, double t) const {
  SimplexMeasure<double> out;
  out.space = space_;
  out.probs.resize(space_->size());
  for (std::int64_t xi = 0; xi < space_->size(); ++xi) out.probs[xi] = transition(eta, xi, t);
  return out;
}

double transition_spectral(const std::shared_ptr<const StateSpace>& space, const Composition& from,
                           const Composition& to, double t, const std::vector<double>& mu,
                           double p) {
  if (t < 0) throw argument_error("transition_spectral: t must be >= 0");
  SpectralKernel kernel(space, mu, p);
  return kernel.transition(space->rank(from), space->rank(to), t);
}

double chi2_closed_form(double t, int k, int N, const std::vector<double>& mu, double p) {
  const int K = static_cast<int>(mu.size());
  if (k < 0 || k >= K) throw argument_error("chi2_closed_form: bad type index");
  if (t < 0) throw argument_error("chi2_closed_form: t must be >= 0");
  double mu_total = 0.0;
  for (double m : mu) {
    if (!(m > 0)) throw argument_error("chi2_closed_form: mu must be positive");
    mu_total += m;
  }
  if (p == 0.0) {
    double x = std::exp(-2.0 * mu_total * t) * (mu_total / mu[k] - 1.0);
    return std::expm1(N * std::log1p(x));
  }
  // sum_{L=1}^N e^{2 lambda_L t} C(N,L) (|a|+2L-1) (|a|)_(L-1) (|a|-a_k)_(L)
  //                                    / ((|a|+N)_(L) (a_k)_(L)),  a = N mu / p
  const double a_k = N * mu[k] / p;
  const double a_tot = N * mu_total / p;
  auto lrising = [](double a, long m) { return std::lgamma(a + m) - std::lgamma(a); };
  std::vector<double> lterms;
  lterms.reserve(N);
  for (int L = 1; L <= N; ++L) {
    double lambda = -mu_total * L - p / N * static_cast<double>(L) * (L - 1);
    double lt = 2.0 * lambda * t;
    lt += std::lgamma(N + 1.0) - std::lgamma(L + 1.0) - std::lgamma(N - L + 1.0);
    lt += std::log(a_tot + 2.0 * L - 1.0);
    lt += lrising(a_tot, L - 1);
    lt += lrising(a_tot - a_k, L);
    lt -= lrising(a_tot + N, L);
    lt -= lrising(a_k, L);
    lterms.push_back(lt);
  }
  double m = -std::numeric_limits<double>::infinity();
  for (double lt : lterms) m = std::max(m, lt);
  if (!std::isfinite(m)) return 0.0;
  double s = 0.0;
  for (double lt : lterms) s += std::exp(lt - m);
  return std::exp(m) * s;
}

double K_const(int k, const std::vector<double>& mu, double p) {
  if (k < 0 || k >= static_cast<int>(mu.size())) throw argument_error("K_const: bad type index");
  if (p < 0) throw argument_error("K_const: p must be >= 0");
  double mu_total = 0.0;
  for (double m : mu) {
    if (!(m > 0)) throw argument_error("K_const: mu must be positive");
    mu_total += m;
  }
  return mu_total * (mu_total - mu[k]) / (mu[k] * (mu_total + p));
}

double cutoff_profile_chi2(double c, int k, const std::vector<double>& mu, double p) {
  return std::expm1(K_const(k, mu, p) * std::exp(-c));
}

double t_cutoff(std::int64_t N, double c, const std::vector<double>& mu) {
  double mu_total = 0.0;
  for (double m : mu) mu_total += m;
  return (std::log(static_cast<double>(N)) + c) / (2.0 * mu_total);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double cutoff_profile_tv_p0(double c, int k, const std::vector<double>& mu) {
  return 2.0 * normal_cdf(0.5 * std::sqrt(K_const(k, mu, 0.0) * std::exp(-c))) - 1.0;
}

double binomial_tv(std::int64_t N, double psi1, double psi2) {
  if (!(psi1 > 0 && psi1 < 1) || !(psi2 > 0 && psi2 < 1))
    throw argument_error("binomial_tv: success probabilities must lie in (0,1)");
  auto lpmf = [N](std::int64_t x, double psi) {
    return std::lgamma(N + 1.0) - std::lgamma(x + 1.0) - std::lgamma(N - x + 1.0) +
           x * std::log(psi) + (N - x) * std::log1p(-psi);
  };
  double acc = 0.0;
  for (std::int64_t x = 0; x <= N; ++x)
    acc += std::fabs(std::exp(lpmf(x, psi1)) - std::exp(lpmf(x, psi2)));
  return 0.5 * acc;
}

double tv_from_nek_p0(std::int64_t N, const std::vector<double>& mu, int k, double t) {
  if (k < 0 || k >= static_cast<int>(mu.size())) throw argument_error("tv_from_nek_p0: bad index");
  double mu_total = 0.0;
  for (double m : mu) mu_total += m;
  double pik = mu[k] / mu_total;
  double decay = std::exp(-mu_total * t);
  return binomial_tv(N, pik, pik * (1.0 - decay) + decay);
}

SimplexMeasure<double> law_at_time_p0(std::shared_ptr<const StateSpace> space, double t, int k,
                                      const std::vector<double>& mu) {
  if (k < 0 || k >= space->K()) throw argument_error("law_at_time_p0: bad type index");
  if (t < 0) throw argument_error("law_at_time_p0: t must be >= 0");
  double mu_total = 0.0;
  for (double m : mu) mu_total += m;
  double decay = std::exp(-mu_total * t);
  std::vector<double> q(mu.size());
  for (std::size_t j = 0; j < mu.size(); ++j)
    q[j] = mu[j] / mu_total * (1.0 - decay) + (static_cast<int>(j) == k ? decay : 0.0);
  return multinomial_measure(std::move(space), q);
}

LowerBound tv_lower_bound(double c, int k, const MutationMatrix<double>& Q, double lambda,
                          const std::vector<double>& V, std::int64_t N) {
  if (c < 0) throw argument_error("tv_lower_bound: c must be >= 0");
  const int K = Q.K();
  if (static_cast<int>(V.size()) != K || k < 0 || k >= K)
    throw argument_error("tv_lower_bound: bad eigenvector or type index");
  if (!(lambda > 0)) throw argument_error("tv_lower_bound: lambda must be positive");
  // Verify Q V = -lambda V.
  double vnorm = 0.0;
  for (double v : V) vnorm = std::max(vnorm, std::fabs(v));
  if (vnorm == 0.0) throw argument_error("tv_lower_bound: zero eigenvector");
  double resid = 0.0;
  for (int i = 0; i < K; ++i) {
    double acc = lambda * V[i];
    for (int j = 0; j < K; ++j) acc += Q.rate(i, j) * V[j];
    resid = std::max(resid, std::fabs(acc));
  }
  if (resid > 1e-9 * std::max(1.0, Q.inf_norm()) * vnorm)
    throw argument_error("tv_lower_bound: V is not an eigenvector for -lambda");
  if (V[k] == 0.0) throw argument_error("tv_lower_bound: v_k must be nonzero");

  LowerBound out;
  out.kappa = 8.0 * (2.0 * lambda + Q.inf_norm());
  out.bound = 1.0 - out.kappa * (vnorm / std::fabs(V[k])) * std::exp(-c);
  out.time = (std::log(static_cast<double>(N)) - c) / (2.0 * lambda);
  return out;
}

double kappa_parent_independent(const std::vector<double>& mu) {
  double mu_total = 0.0;
  for (double m : mu) mu_total += m;
  return 32.0 * mu_total;
}

double max_tv(const GeneratorMatrix<double>& G, double t) {
  auto pi = stationary_of_generator(G);
  double worst = 0.0;
  for (std::int64_t r = 0; r < G.dim(); ++r)
    worst = std::max(worst, tv(transition_row(G, t, r), pi));
  return worst;
}

DecayFit estimate_decay_rate(const MixingCurve& curve) {
  const std::size_t n = curve.grid.size();
  if (n != curve.values.size()) throw argument_error("estimate_decay_rate: size mismatch");
  for (std::size_t i = 1; i < n; ++i)
    if (!(curve.grid[i] > curve.grid[i - 1]))
      throw argument_error("estimate_decay_rate: time grid must be strictly increasing");
  std::size_t begin = static_cast<std::size_t>(0.4 * static_cast<double>(n));
  if (n - begin < 6) throw argument_error("estimate_decay_rate: curve too short (need >= 6 tail points)");
  // Least squares for log d = a + q log t - rho t.
  double S[3][3] = {{0}};
  double rhs[3] = {0};
  for (std::size_t i = begin; i < n; ++i) {
    double t = curve.grid[i];
    double d = curve.values[i];
    if (!(t > 0) || !(d > 0))
      throw argument_error("estimate_decay_rate: needs positive times and distances");
    double row[3] = {1.0, std::log(t), -t};
    double y = std::log(d);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) S[a][b] += row[a] * row[b];
      rhs[a] += row[a] * y;
    }
  }
  std::vector<std::vector<double>> A{{S[0][0], S[0][1], S[0][2]},
                                     {S[1][0], S[1][1], S[1][2]},
                                     {S[2][0], S[2][1], S[2][2]}};
  auto sol = solve_linear(A, std::vector<double>{rhs[0], rhs[1], rhs[2]});
  return DecayFit{sol[2], sol[1]};
}

}  // namespace moran
