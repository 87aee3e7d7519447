#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "moran/simplex.hpp"

namespace moran {

/// Counter-style generator: one independently seeded stream per replica.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in (0, 1].
  double uniform_pos() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

/// Deterministic per-replica stream derived from (seed, replica).
SplitMix64 replica_rng(std::uint64_t seed, std::int64_t replica);

struct SimConfig {
  int K = 0;
  int N = 0;
  std::vector<std::vector<double>> rates;  // K x K mutation rates, diagonal ignored
  double p = 0.0;
  Composition start;
  double horizon = 0.0;
  std::int64_t replicas = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Event rates at a state: r[i][j] = eta(i) (mu_ij + (p/N) eta(j)), zero diagonal.
std::vector<std::vector<double>> event_rates(const SimConfig& cfg, const Composition& eta);

/// Endpoint of one replica's trajectory at the horizon (deterministic per seed/replica).
Composition sample_state_at(const SimConfig& cfg, std::int64_t replica);

/// Histogram of replica endpoints, replicas distributed across worker threads.
std::map<Composition, std::int64_t> simulate_histogram(const SimConfig& cfg);

struct TvEstimate {
  double estimate = 0.0;
  double stderr_boot = 0.0;
};

/**
 * Plug-in TV estimate of the empirical endpoint law against a reference pmf,
 * with a bootstrap standard error (Poisson bootstrap over histogram cells).
 * Needs >= 1000 replicas.
 */
TvEstimate empirical_tv(const std::map<Composition, std::int64_t>& histogram,
                        std::int64_t replicas,
                        const std::function<double(const Composition&)>& reference_pmf,
                        std::uint64_t seed = 12345, int resamples = 200);

}  // namespace moran
