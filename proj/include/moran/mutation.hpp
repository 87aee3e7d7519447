#pragma once

#include <optional>
#include <string>
#include <vector>

#include "moran/errors.hpp"
#include "moran/field.hpp"

namespace moran {

/**
 * Validated K x K mutation rate matrix: nonnegative off-diagonal rates, each
 * diagonal entry recomputed as minus the row sum of the off-diagonals, and the
 * positive-rate digraph strongly connected.
 */
template <class F>
class MutationMatrix {
 public:
  /// Validates `raw` (diagonal entries are ignored and recomputed).
  static MutationMatrix validate(const std::vector<std::vector<F>>& raw);

  int K() const { return K_; }
  const F& rate(int i, int j) const { return rates_[static_cast<std::size_t>(i) * K_ + j]; }

  std::vector<std::vector<F>> dense() const;

  /// Max absolute row sum |q_ii| + sum_{j != i} q_ij = 2 |q_ii|.
  F inf_norm() const;

  /// Scales every rate by c > 0.
  MutationMatrix scaled(const F& c) const;

  /// Off-diagonal rates independent of the source type: mu with rate(i,j) = mu_j.
  std::optional<std::vector<F>> parent_independent_rates() const;

 private:
  MutationMatrix() = default;
  int K_ = 0;
  std::vector<F> rates_;
};

/// Q_mu: mutation to type j at rate mu_j regardless of the current type.
template <class F>
MutationMatrix<F> build_parent_independent(const std::vector<F>& mu);

/// Asymmetric nearest-neighbour walk on the K-cycle: rate 1 forward, theta backward.
template <class F>
MutationMatrix<F> build_cycle_walk(int K, const F& theta);

// ---------------------------------------------------------------------------

template <class F>
MutationMatrix<F> MutationMatrix<F>::validate(const std::vector<std::vector<F>>& raw) {
  const int K = static_cast<int>(raw.size());
  if (K < 2) throw validation_error("mutation matrix must be at least 2 x 2");
  for (const auto& row : raw)
    if (static_cast<int>(row.size()) != K) throw validation_error("mutation matrix must be square");

  MutationMatrix m;
  m.K_ = K;
  m.rates_.assign(static_cast<std::size_t>(K) * K, field_traits<F>::from_long(0));
  for (int i = 0; i < K; ++i) {
    F diag = field_traits<F>::from_long(0);
    for (int j = 0; j < K; ++j) {
      if (i == j) continue;
      if (raw[i][j] < field_traits<F>::from_long(0))
        throw validation_error("negative off-diagonal mutation rate at (" + std::to_string(i + 1) +
                               "," + std::to_string(j + 1) + ")");
      m.rates_[static_cast<std::size_t>(i) * K + j] = raw[i][j];
      diag -= raw[i][j];
    }
    m.rates_[static_cast<std::size_t>(i) * K + i] = diag;
  }

  // Irreducibility: forward and reverse reachability from type 1 over positive rates.
  auto reach = [&](bool forward) {
    std::vector<char> seen(K, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < K; ++v) {
        if (v == u || seen[v]) continue;
        const F& r = forward ? m.rate(u, v) : m.rate(v, u);
        if (r > field_traits<F>::from_long(0)) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    return seen;
  };
  auto fwd = reach(true);
  auto bwd = reach(false);
  for (int v = 0; v < K; ++v) {
    if (!fwd[v])
      throw validation_error("reducible mutation matrix: type " + std::to_string(v + 1) +
                             " unreachable from type 1");
    if (!bwd[v])
      throw validation_error("reducible mutation matrix: type 1 unreachable from type " +
                             std::to_string(v + 1));
  }
  return m;
}

template <class F>
std::vector<std::vector<F>> MutationMatrix<F>::dense() const {
  std::vector<std::vector<F>> out(K_, std::vector<F>(K_));
  for (int i = 0; i < K_; ++i)
    for (int j = 0; j < K_; ++j) out[i][j] = rate(i, j);
  return out;
}

template <class F>
F MutationMatrix<F>::inf_norm() const {
  F best = field_traits<F>::from_long(0);
  for (int i = 0; i < K_; ++i) {
    F row = field_traits<F>::from_long(0);
    for (int j = 0; j < K_; ++j) row += field_traits<F>::abs(rate(i, j));
    if (row > best) best = row;
  }
  return best;
}

template <class F>
MutationMatrix<F> MutationMatrix<F>::scaled(const F& c) const {
  if (!(c > field_traits<F>::from_long(0))) throw argument_error("scale factor must be positive");
  auto raw = dense();
  for (auto& row : raw)
    for (auto& x : row) x *= c;
  return validate(raw);
}

template <class F>
std::optional<std::vector<F>> MutationMatrix<F>::parent_independent_rates() const {
  std::vector<F> mu(K_);
  for (int j = 0; j < K_; ++j) {
    bool have = false;
    for (int i = 0; i < K_; ++i) {
      if (i == j) continue;
      if (!have) {
        mu[j] = rate(i, j);
        have = true;
      } else if (!(rate(i, j) == mu[j])) {
        return std::nullopt;
      }
    }
    if (!(mu[j] > field_traits<F>::from_long(0))) return std::nullopt;
  }
  return mu;
}

template <class F>
MutationMatrix<F> build_parent_independent(const std::vector<F>& mu) {
  const int K = static_cast<int>(mu.size());
  if (K < 2) throw argument_error("parent-independent model needs K >= 2");
  for (const F& m : mu)
    if (!(m > field_traits<F>::from_long(0)))
      throw argument_error("parent-independent rates must be positive");
  std::vector<std::vector<F>> raw(K, std::vector<F>(K, field_traits<F>::from_long(0)));
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j)
      if (i != j) raw[i][j] = mu[j];
  return MutationMatrix<F>::validate(raw);
}

template <class F>
MutationMatrix<F> build_cycle_walk(int K, const F& theta) {
  if (K < 2) throw argument_error("cycle walk needs K >= 2");
  if (theta < field_traits<F>::from_long(0)) throw argument_error("cycle walk needs theta >= 0");
  std::vector<std::vector<F>> raw(K, std::vector<F>(K, field_traits<F>::from_long(0)));
  for (int i = 0; i < K; ++i) {
    raw[i][(i + 1) % K] += field_traits<F>::from_long(1);
    raw[i][(i + K - 1) % K] += theta;
  }
  return MutationMatrix<F>::validate(raw);
}

}  // namespace moran
