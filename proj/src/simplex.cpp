#include "moran/simplex.hpp"

#include <limits>
#include <numeric>

#include "moran/errors.hpp"

namespace moran {

BigInt cardinality(int K, int N) {
  if (K < 1) throw argument_error("cardinality: K must be >= 1");
  if (N < 0) throw argument_error("cardinality: N must be >= 0");
  return binomial(K - 1 + N, N);
}

StateSpace::StateSpace(int K, int N) : K_(K), N_(N) {
  if (K < 1) throw argument_error("StateSpace: K must be >= 1");
  if (N < 0) throw argument_error("StateSpace: N must be >= 0");

  BigInt card = cardinality(K, N);
  if (card > BigInt(1) << 26) throw capacity_error("StateSpace: too many states to enumerate");

  // Pascal triangle up to C(N+K, K); all values fit by the cap above except
  // high-k entries never used by rank(); saturate those instead of overflowing.
  const int nmax = N + K;
  binom_.assign(nmax + 1, std::vector<std::uint64_t>(K + 1, 0));
  const std::uint64_t inf = std::numeric_limits<std::uint64_t>::max();
  for (int n = 0; n <= nmax; ++n) {
    binom_[n][0] = 1;
    for (int k = 1; k <= K && k <= n; ++k) {
      std::uint64_t a = binom_[n - 1][k - 1];
      std::uint64_t b = (k <= n - 1) ? binom_[n - 1][k] : 0;
      binom_[n][k] = (a == inf || b == inf || a > inf - b) ? inf : a + b;
    }
  }

  // Colexicographic enumeration: start with all mass on type 1, then repeatedly
  // move one unit into the lowest position that can absorb the carry.
  states_.reserve(card.get_ui());
  Composition eta(K, 0);
  eta[0] = N;
  states_.push_back(eta);
  while (true) {
    int j = -1;
    for (int k = 0; k + 1 < K; ++k)
      if (eta[k] > 0) {
        j = k;
        break;
      }
    if (j < 0) break;
    int carry = eta[j] - 1;
    eta[j] = 0;
    eta[j + 1] += 1;
    eta[0] = carry;
    states_.push_back(eta);
  }
}

const Composition& StateSpace::state(std::int64_t rank) const {
  if (rank < 0 || rank >= size()) throw argument_error("StateSpace: rank out of range");
  return states_[static_cast<std::size_t>(rank)];
}

bool StateSpace::contains(const Composition& eta) const {
  if (static_cast<int>(eta.size()) != K_) return false;
  long sum = 0;
  for (int v : eta) {
    if (v < 0) return false;
    sum += v;
  }
  return sum == N_;
}

std::int64_t StateSpace::rank(const Composition& eta) const {
  if (!contains(eta)) throw argument_error("StateSpace: state not in space");
  // Count states strictly below eta in colex order, grouping on the trailing
  // coordinate: rank = sum_{j=K..2} sum_{v < eta(j)} C(R_j - v + j - 2, j - 2),
  // with R_j the mass held by coordinates 1..j.
  std::int64_t r = 0;
  int R = N_;
  for (int j = K_; j >= 2; --j) {
    for (int v = 0; v < eta[j - 1]; ++v)
      r += static_cast<std::int64_t>(binom_[R - v + j - 2][j - 2]);
    R -= eta[j - 1];
  }
  return r;
}

std::shared_ptr<const StateSpace> make_space(int K, int N) {
  return std::make_shared<const StateSpace>(K, N);
}

Word psi(const Composition& eta) {
  Word w;
  for (std::size_t k = 0; k < eta.size(); ++k) {
    if (eta[k] < 0) throw argument_error("psi: negative count");
    for (int i = 0; i < eta[k]; ++i) w.push_back(static_cast<int>(k) + 1);
  }
  return w;
}

Composition phi(const Word& word, int K) {
  Composition eta(K, 0);
  for (int letter : word) {
    if (letter < 1 || letter > K) throw argument_error("phi: letter out of range");
    eta[letter - 1] += 1;
  }
  return eta;
}

BigInt multinomial_coeff(int N, const Composition& eta) {
  long sum = std::accumulate(eta.begin(), eta.end(), 0L);
  if (sum != N) throw argument_error("multinomial_coeff: parts do not sum to N");
  BigInt acc = 1;
  long used = 0;
  for (int part : eta) {
    if (part < 0) throw argument_error("multinomial_coeff: negative part");
    used += part;
    acc *= binomial(used, part);
  }
  return acc;
}

}  // namespace moran
