#include "moran/simulate.hpp"

#include <cmath>
#include <mutex>
#include <numeric>

#include "moran/errors.hpp"
#include "moran/parallel.hpp"

namespace moran {

SplitMix64 replica_rng(std::uint64_t seed, std::int64_t replica) {
  // Two mixing rounds separate the (seed, replica) lattice before use.
  SplitMix64 mixer(seed ^ (0x5851f42d4c957f2dULL * static_cast<std::uint64_t>(replica + 1)));
  std::uint64_t s = mixer.next();
  s ^= mixer.next() << 1;
  return SplitMix64(s);
}

void SimConfig::validate() const {
  if (K < 2) throw argument_error("SimConfig: K must be >= 2");
  if (N < 1) throw argument_error("SimConfig: N must be >= 1");
  if (p < 0) throw argument_error("SimConfig: p must be >= 0");
  if (horizon < 0) throw argument_error("SimConfig: horizon must be >= 0");
  if (replicas < 1) throw argument_error("SimConfig: need at least one replica");
  if (static_cast<int>(rates.size()) != K) throw argument_error("SimConfig: rates must be K x K");
  for (int i = 0; i < K; ++i) {
    if (static_cast<int>(rates[i].size()) != K) throw argument_error("SimConfig: rates must be K x K");
    for (int j = 0; j < K; ++j)
      if (i != j && !(rates[i][j] >= 0)) throw argument_error("SimConfig: negative mutation rate");
  }
  if (static_cast<int>(start.size()) != K) throw argument_error("SimConfig: bad start state");
  long total = 0;
  for (int v : start) {
    if (v < 0) throw argument_error("SimConfig: bad start state");
    total += v;
  }
  if (total != N) throw argument_error("SimConfig: start state must sum to N");
}

std::vector<std::vector<double>> event_rates(const SimConfig& cfg, const Composition& eta) {
  std::vector<std::vector<double>> r(cfg.K, std::vector<double>(cfg.K, 0.0));
  for (int i = 0; i < cfg.K; ++i) {
    if (eta[i] == 0) continue;
    for (int j = 0; j < cfg.K; ++j) {
      if (j == i) continue;
      r[i][j] = eta[i] * (cfg.rates[i][j] + cfg.p / cfg.N * eta[j]);
    }
  }
  return r;
}

Composition sample_state_at(const SimConfig& cfg, std::int64_t replica) {
  cfg.validate();
  SplitMix64 rng = replica_rng(cfg.seed, replica);
  Composition eta = cfg.start;
  auto table = event_rates(cfg, eta);
  double total = 0.0;
  for (const auto& row : table) total = std::accumulate(row.begin(), row.end(), total);

  double t = 0.0;
  std::int64_t events = 0;
  while (total > 0.0) {
    t += -std::log(rng.uniform_pos()) / total;
    if (t > cfg.horizon) break;
    double u = rng.uniform() * total;
    int mi = -1, mj = -1;
    double cum = 0.0;
    for (int i = 0; i < cfg.K && mi < 0; ++i)
      for (int j = 0; j < cfg.K; ++j) {
        cum += table[i][j];
        if (u < cum) {
          mi = i;
          mj = j;
          break;
        }
      }
    if (mi < 0) {  // u fell past the table due to rounding drift: take the last positive rate
      for (int i = cfg.K - 1; i >= 0 && mi < 0; --i)
        for (int j = cfg.K - 1; j >= 0; --j)
          if (table[i][j] > 0.0) {
            mi = i;
            mj = j;
            break;
          }
      if (mi < 0) break;
    }
    eta[mi] -= 1;
    eta[mj] += 1;

    // Incremental rate update: rows and columns touching mi or mj change.
    ++events;
    if ((events & 0xfffff) == 0) {
      table = event_rates(cfg, eta);
      total = 0.0;
      for (const auto& row : table) total = std::accumulate(row.begin(), row.end(), total);
      continue;
    }
    for (int i = 0; i < cfg.K; ++i) {
      for (int j = 0; j < cfg.K; ++j) {
        if (i != mi && i != mj && j != mi && j != mj) continue;
        if (i == j) continue;
        double fresh = eta[i] == 0 ? 0.0 : eta[i] * (cfg.rates[i][j] + cfg.p / cfg.N * eta[j]);
        total += fresh - table[i][j];
        table[i][j] = fresh;
      }
    }
    if (total < 0.0) total = 0.0;
  }
  return eta;
}

std::map<Composition, std::int64_t> simulate_histogram(const SimConfig& cfg) {
  cfg.validate();
  std::map<Composition, std::int64_t> hist;
  std::mutex lock;
  const unsigned workers = worker_count();
  const std::int64_t chunks = std::min<std::int64_t>(cfg.replicas, workers * 8L);
  parallel_for(chunks, [&](std::int64_t chunk) {
    std::map<Composition, std::int64_t> local;
    for (std::int64_t r = chunk; r < cfg.replicas; r += chunks) local[sample_state_at(cfg, r)]++;
    std::lock_guard<std::mutex> guard(lock);
    for (const auto& [state, count] : local) hist[state] += count;
  });
  return hist;
}

TvEstimate empirical_tv(const std::map<Composition, std::int64_t>& histogram,
                        std::int64_t replicas,
                        const std::function<double(const Composition&)>& reference_pmf,
                        std::uint64_t seed, int resamples) {
  if (replicas < 1000) throw argument_error("empirical_tv: need at least 1000 replicas");
  std::int64_t observed = 0;
  for (const auto& [state, count] : histogram) observed += count;
  if (observed != replicas) throw argument_error("empirical_tv: histogram does not match replicas");

  std::vector<double> ref;
  std::vector<std::int64_t> counts;
  ref.reserve(histogram.size());
  counts.reserve(histogram.size());
  double covered = 0.0;
  for (const auto& [state, count] : histogram) {
    double q = reference_pmf(state);
    ref.push_back(q);
    counts.push_back(count);
    covered += q;
  }
  const double uncovered = std::max(0.0, 1.0 - covered);

  auto plug_in = [&](const std::vector<std::int64_t>& cts, std::int64_t total) {
    double acc = uncovered;
    for (std::size_t i = 0; i < cts.size(); ++i)
      acc += std::fabs(static_cast<double>(cts[i]) / total - ref[i]);
    return 0.5 * acc;
  };

  TvEstimate out;
  out.estimate = plug_in(counts, replicas);

  // Poisson bootstrap: resampled cell counts ~ Poisson(count).
  SplitMix64 rng = replica_rng(seed, 0x626f6f74);
  auto poisson = [&rng](double mean) -> std::int64_t {
    if (mean <= 0) return 0;
    if (mean < 30.0) {
      double limit = std::exp(-mean);
      double prod = 1.0;
      std::int64_t k = -1;
      do {
        prod *= rng.uniform_pos();
        ++k;
      } while (prod > limit);
      return k;
    }
    // normal approximation in the bulk
    double u1 = rng.uniform_pos(), u2 = rng.uniform_pos();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    double v = std::round(mean + std::sqrt(mean) * z);
    return v < 0 ? 0 : static_cast<std::int64_t>(v);
  };

  double mean = 0.0, sq = 0.0;
  std::vector<std::int64_t> resampled(counts.size());
  for (int b = 0; b < resamples; ++b) {
    std::int64_t total = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      resampled[i] = poisson(static_cast<double>(counts[i]));
      total += resampled[i];
    }
    if (total == 0) continue;
    double v = plug_in(resampled, total);
    mean += v;
    sq += v * v;
  }
  mean /= resamples;
  sq /= resamples;
  out.stderr_boot = std::sqrt(std::max(0.0, sq - mean * mean));
  return out;
}

}  // namespace moran
