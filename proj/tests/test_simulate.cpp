#include <cmath>
#include <numeric>

#include "doctest.h"
#include "moran/generator.hpp"
#include "moran/mixing.hpp"
#include "moran/simulate.hpp"

using namespace moran;

namespace {

SimConfig base_config(int K, int N, const std::vector<double>& mu, double p) {
  SimConfig cfg;
  cfg.K = K;
  cfg.N = N;
  cfg.p = p;
  cfg.rates.assign(K, std::vector<double>(K, 0.0));
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j)
      if (i != j) cfg.rates[i][j] = mu[j];
  cfg.start.assign(K, 0);
  cfg.start[0] = N;
  return cfg;
}

}  // namespace

TEST_CASE("simulator basics") {
  std::vector<double> mu{0.4, 0.35, 0.25};
  auto cfg = base_config(3, 6, mu, 1.5);
  cfg.horizon = 0.8;
  cfg.seed = 99;

  SUBCASE("zero horizon returns the start state") {
    auto cfg0 = cfg;
    cfg0.horizon = 0.0;
    CHECK(sample_state_at(cfg0, 7) == cfg0.start);
  }
  SUBCASE("determinism per (seed, replica)") {
    for (std::int64_t r : {0, 1, 17}) {
      auto a = sample_state_at(cfg, r);
      auto b = sample_state_at(cfg, r);
      CHECK(a == b);
    }
    CHECK(sample_state_at(cfg, 0) != sample_state_at(cfg, 12345));  // overwhelmingly likely
  }
  SUBCASE("population is conserved") {
    for (std::int64_t r = 0; r < 200; ++r) {
      auto eta = sample_state_at(cfg, r);
      CHECK(std::accumulate(eta.begin(), eta.end(), 0) == cfg.N);
    }
  }
  SUBCASE("rate audit against the generator") {
    auto Q = MutationMatrix<double>::validate(cfg.rates);
    auto G = build_moran_generator(Q, cfg.N, cfg.p);
    const auto& s = *G.space;
    for (std::int64_t r = 0; r < s.size(); r += 3) {
      const Composition& eta = s.state(r);
      auto table = event_rates(cfg, eta);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          if (i == j || eta[i] == 0) continue;
          Composition target = eta;
          target[i] -= 1;
          target[j] += 1;
          CHECK(table[i][j] == doctest::Approx(G.entry(r, s.rank(target))).epsilon(1e-13));
        }
    }
  }
  SUBCASE("config validation") {
    auto bad = cfg;
    bad.start[0] -= 1;
    CHECK_THROWS_AS(sample_state_at(bad, 0), argument_error);
  }
}

TEST_CASE("endpoint law matches the closed form (multinomial bands)") {
  // p = 0: the endpoint is multinomial with drifting weights; check each
  // state count against a 3-sigma band at 1e5 replicas.
  std::vector<double> mu{0.6, 0.4};
  auto cfg = base_config(2, 10, mu, 0.0);
  cfg.horizon = 0.9;
  cfg.replicas = 100000;
  cfg.seed = 424242;
  auto hist = simulate_histogram(cfg);

  auto space = make_space(2, 10);
  auto law = law_at_time_p0(space, cfg.horizon, 0, mu);
  for (std::int64_t r = 0; r < space->size(); ++r) {
    double q = law.probs[r];
    double expectation = cfg.replicas * q;
    double sigma = std::sqrt(cfg.replicas * q * (1 - q));
    auto it = hist.find(space->state(r));
    double count = it == hist.end() ? 0.0 : static_cast<double>(it->second);
    CHECK(std::fabs(count - expectation) <= 3.0 * sigma + 1e-9);
  }
}

TEST_CASE("empirical tv estimator") {
  SUBCASE("empirical against itself is zero") {
    std::vector<double> mu{0.5, 0.5};
    auto cfg = base_config(2, 4, mu, 1.0);
    cfg.horizon = 0.5;
    cfg.replicas = 2000;
    cfg.seed = 5;
    auto hist = simulate_histogram(cfg);
    auto self_ref = [&](const Composition& eta) {
      auto it = hist.find(eta);
      return it == hist.end() ? 0.0
                              : static_cast<double>(it->second) / static_cast<double>(cfg.replicas);
    };
    auto est = empirical_tv(hist, cfg.replicas, self_ref);
    CHECK(est.estimate == doctest::Approx(0.0));
  }
  SUBCASE("stationary start stays near zero") {
    std::vector<double> mu{0.5, 0.5};
    auto cfg = base_config(2, 2, mu, 0.0);
    cfg.start = {1, 1};  // modal state of the stationary binomial
    cfg.horizon = 6.0;   // several relaxation times
    cfg.replicas = 100000;
    cfg.seed = 777;
    auto hist = simulate_histogram(cfg);
    auto space = make_space(2, 2);
    auto nu = stationary_nu<double>(space, mu, 0.0);
    auto est = empirical_tv(hist, cfg.replicas,
                            [&](const Composition& eta) { return nu.at(eta); });
    CHECK(est.estimate <= 3.0 * est.stderr_boot);
  }
  SUBCASE("replica floor") {
    std::map<Composition, std::int64_t> hist{{Composition{1, 0}, 500}};
    CHECK_THROWS_AS(empirical_tv(hist, 500, [](const Composition&) { return 1.0; }),
                    argument_error);
  }
}

TEST_CASE("small full model matches the matrix semigroup distance") {
  std::vector<double> mu{1.0 / 6, 2.0 / 6, 3.0 / 6};
  auto cfg = base_config(3, 4, mu, 1.0);
  cfg.horizon = 0.7;
  cfg.replicas = 100000;
  cfg.seed = 31337;
  auto hist = simulate_histogram(cfg);

  auto Q = MutationMatrix<double>::validate(cfg.rates);
  auto G = build_moran_generator(Q, cfg.N, cfg.p);
  auto space = G.space;
  auto nu = stationary_of_generator(G);
  double matrix_tv = tv(transition_row(G, cfg.horizon, space->rank(cfg.start)), nu);

  auto est = empirical_tv(hist, cfg.replicas,
                          [&](const Composition& eta) { return nu.at(eta); });
  CHECK(std::fabs(est.estimate - matrix_tv) < 0.01);
}

TEST_CASE("cutoff sanity at population five hundred") {
  const int N = 500;
  std::vector<double> mu{1.0 / 3, 1.0 / 3, 1.0 / 3};
  std::vector<double> q{1.0 / 3, 1.0 / 3, 1.0 / 3};
  auto nu = [&](const Composition& eta) { return multinomial_pmf<double>(eta, N, q); };

  auto cfg = base_config(3, N, mu, 0.0);
  cfg.seed = 2718;

  cfg.horizon = t_cutoff(N, -2.0, mu);
  cfg.replicas = 20000;
  auto before = empirical_tv(simulate_histogram(cfg), cfg.replicas, nu);
  CHECK(before.estimate > 0.8);

  cfg.horizon = t_cutoff(N, 4.0, mu);
  cfg.replicas = 200000;
  auto after = empirical_tv(simulate_histogram(cfg), cfg.replicas, nu);
  CHECK(after.estimate < 0.1);
}
