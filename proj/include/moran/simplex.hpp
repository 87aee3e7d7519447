#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "moran/exact.hpp"

namespace moran {

/// A population configuration: eta(k) individuals of type k+1, sum = N.
using Composition = std::vector<int>;

/// A configuration of N distinguishable particles, letters in 1..K.
using Word = std::vector<int>;

/// Number of states of the K-type, N-individual simplex: C(K-1+N, N).
BigInt cardinality(int K, int N);

/**
 * The enumerated discrete simplex E_{K,N}: all compositions of N into K
 * nonnegative parts, in colexicographic order, with O(K log) ranking via the
 * combinatorial number system.  Immutable after construction; safe to share
 * across threads read-only.
 */
class StateSpace {
 public:
  StateSpace(int K, int N);

  int K() const { return K_; }
  int N() const { return N_; }
  std::int64_t size() const { return static_cast<std::int64_t>(states_.size()); }

  const Composition& state(std::int64_t rank) const;
  std::int64_t rank(const Composition& eta) const;
  const std::vector<Composition>& states() const { return states_; }

  /// True when eta is a valid member (right length, nonnegative, sums to N).
  bool contains(const Composition& eta) const;

 private:
  int K_;
  int N_;
  std::vector<Composition> states_;
  // binom_[n][k] = C(n, k), n <= N+K, k <= K; used by rank().
  std::vector<std::vector<std::uint64_t>> binom_;
};

std::shared_ptr<const StateSpace> make_space(int K, int N);

/// eta -> sorted word (eta(1) ones, then eta(2) twos, ...).
Word psi(const Composition& eta);

/// word -> type counts; invariant under permutations of the word.
Composition phi(const Word& word, int K);

/// Multinomial coefficient N! / prod eta(k)!.
BigInt multinomial_coeff(int N, const Composition& eta);

}  // namespace moran
