#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <vector>

#include "moran/field.hpp"
#include "moran/mutation.hpp"
#include "moran/simplex.hpp"

namespace moran {

enum class GeneratorKind { Mutation, Reproduction, Moran, ParentIndependent, Selection };

/**
 * Sparse rate matrix over E_{K,N}, row-compressed with columns sorted.  Rows
 * sum to zero; off-diagonal entries sit only on single-individual moves
 * eta -> eta - e_i + e_j.
 */
template <class F>
class GeneratorMatrix {
 public:
  std::shared_ptr<const StateSpace> space;
  GeneratorKind kind = GeneratorKind::Mutation;

  std::int64_t dim() const { return space->size(); }

  F entry(std::int64_t row, std::int64_t col) const {
    for (std::int64_t k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k)
      if (col_[k] == col) return val_[k];
    return field_traits<F>::from_long(0);
  }

  /// (G f)(eta) = sum_xi G[eta, xi] f(xi).
  std::vector<F> apply(const std::vector<F>& f) const {
    std::vector<F> out(dim(), field_traits<F>::from_long(0));
    for (std::int64_t r = 0; r < dim(); ++r)
      for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) out[r] += val_[k] * f[col_[k]];
    return out;
  }

  /// Row-vector action (v G)(xi) = sum_eta v(eta) G[eta, xi].
  std::vector<F> apply_left(const std::vector<F>& v) const {
    std::vector<F> out(dim(), field_traits<F>::from_long(0));
    for (std::int64_t r = 0; r < dim(); ++r) {
      if (field_traits<F>::is_zero(v[r])) continue;
      for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) out[col_[k]] += v[r] * val_[k];
    }
    return out;
  }

  std::vector<std::vector<F>> dense() const {
    std::vector<std::vector<F>> out(dim(), std::vector<F>(dim(), field_traits<F>::from_long(0)));
    for (std::int64_t r = 0; r < dim(); ++r)
      for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) out[r][col_[k]] = val_[k];
    return out;
  }

  /// Total exit rate -G[row,row].
  F exit_rate(std::int64_t row) const { return -entry(row, row); }

  template <class Fn>
  void for_row(std::int64_t row, Fn&& fn) const {
    for (std::int64_t k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k) fn(col_[k], val_[k]);
  }

  std::int64_t row_nnz(std::int64_t row) const { return row_ptr_[row + 1] - row_ptr_[row]; }

  /// Builds from per-row (col, rate) lists of off-diagonal rates; adds the diagonal.
  static GeneratorMatrix from_rows(std::shared_ptr<const StateSpace> space, GeneratorKind kind,
                                   std::vector<std::vector<std::pair<std::int64_t, F>>>&& rows) {
    GeneratorMatrix g;
    g.space = std::move(space);
    g.kind = kind;
    const std::int64_t n = g.space->size();
    g.row_ptr_.assign(n + 1, 0);
    std::int64_t nnz = 0;
    for (std::int64_t r = 0; r < n; ++r) nnz += static_cast<std::int64_t>(rows[r].size()) + 1;
    g.col_.reserve(nnz);
    g.val_.reserve(nnz);
    for (std::int64_t r = 0; r < n; ++r) {
      auto& row = rows[r];
      F diag = field_traits<F>::from_long(0);
      for (const auto& [c, v] : row) diag -= v;
      row.emplace_back(r, diag);
      std::sort(row.begin(), row.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      for (const auto& [c, v] : row) {
        g.col_.push_back(c);
        g.val_.push_back(v);
      }
      g.row_ptr_[r + 1] = static_cast<std::int64_t>(g.col_.size());
    }
    return g;
  }

 private:
  std::vector<std::int64_t> row_ptr_;
  std::vector<std::int64_t> col_;
  std::vector<F> val_;
};

namespace detail {

/// Assembles a generator whose rate for eta -> eta - e_i + e_j is rate_fn(eta, i, j).
template <class F, class RateFn>
GeneratorMatrix<F> build_single_move_generator(std::shared_ptr<const StateSpace> space,
                                               GeneratorKind kind, RateFn&& rate_fn) {
  const int K = space->K();
  const std::int64_t n = space->size();
  std::vector<std::vector<std::pair<std::int64_t, F>>> rows(n);
  for (std::int64_t r = 0; r < n; ++r) {
    const Composition& eta = space->state(r);
    Composition target = eta;
    for (int i = 0; i < K; ++i) {
      if (eta[i] == 0) continue;
      for (int j = 0; j < K; ++j) {
        if (j == i) continue;
        F rate = rate_fn(eta, i, j);
        if (field_traits<F>::is_zero(rate)) continue;
        target[i] -= 1;
        target[j] += 1;
        rows[r].emplace_back(space->rank(target), rate);
        target[i] += 1;
        target[j] -= 1;
      }
    }
  }
  return GeneratorMatrix<F>::from_rows(std::move(space), kind, std::move(rows));
}

}  // namespace detail

/// Independent-mutation generator: rate eta -> eta - e_i + e_j equals eta(i) mu_ij.
template <class F>
GeneratorMatrix<F> build_mutation_generator(const MutationMatrix<F>& Q, int N) {
  if (N < 1) throw argument_error("build_mutation_generator: N must be >= 1");
  auto space = make_space(Q.K(), N);
  return detail::build_single_move_generator<F>(
      space, GeneratorKind::Mutation, [&Q](const Composition& eta, int i, int j) -> F {
        return field_traits<F>::from_long(eta[i]) * Q.rate(i, j);
      });
}

/// Reproduction generator: rate eta(i) eta(j) for i != j.
template <class F>
GeneratorMatrix<F> build_reproduction_generator(int K, int N) {
  if (K < 2) throw argument_error("build_reproduction_generator: K must be >= 2");
  if (N < 2) throw argument_error("build_reproduction_generator: N must be >= 2");
  auto space = make_space(K, N);
  return detail::build_single_move_generator<F>(
      space, GeneratorKind::Reproduction, [](const Composition& eta, int i, int j) -> F {
        return field_traits<F>::from_long(static_cast<long long>(eta[i]) * eta[j]);
      });
}

/**
 * Full model: rate eta(i) (mu_ij + (p/N) eta(j)).  With `no_self_duplication`
 * the reproduction factor becomes p/(N-1) (the removed individual cannot be
 * the one duplicated).
 */
template <class F>
GeneratorMatrix<F> build_moran_generator(const MutationMatrix<F>& Q, int N, const F& p,
                                         bool no_self_duplication = false) {
  if (N < 1) throw argument_error("build_moran_generator: N must be >= 1");
  if (p < field_traits<F>::from_long(0)) throw argument_error("build_moran_generator: p must be >= 0");
  if (no_self_duplication && N < 2)
    throw argument_error("build_moran_generator: N must be >= 2 without self-duplication");
  auto space = make_space(Q.K(), N);
  F factor = p / field_traits<F>::from_long(no_self_duplication ? N - 1 : N);
  auto mu = Q.parent_independent_rates();
  GeneratorKind kind = mu ? GeneratorKind::ParentIndependent : GeneratorKind::Moran;
  return detail::build_single_move_generator<F>(
      space, kind, [&Q, &factor](const Composition& eta, int i, int j) -> F {
        return field_traits<F>::from_long(eta[i]) *
               (Q.rate(i, j) + factor * field_traits<F>::from_long(eta[j]));
      });
}

/// Parent-independent model with selection at birth: rate eta(i) (mu_j + p_j eta(j) / N).
template <class F>
GeneratorMatrix<F> build_selection_generator(const std::vector<F>& mu, const std::vector<F>& p,
                                             int N) {
  const int K = static_cast<int>(mu.size());
  if (static_cast<int>(p.size()) != K) throw argument_error("selection: |p| must equal |mu|");
  if (N < 1) throw argument_error("selection: N must be >= 1");
  for (const F& x : mu)
    if (!(x > field_traits<F>::from_long(0))) throw argument_error("selection: mu must be positive");
  for (const F& x : p)
    if (!(x > field_traits<F>::from_long(0))) throw argument_error("selection: p must be positive");
  auto space = make_space(K, N);
  F invN = field_traits<F>::from_long(1) / field_traits<F>::from_long(N);
  return detail::build_single_move_generator<F>(
      space, GeneratorKind::Selection, [&](const Composition& eta, int i, int j) -> F {
        return field_traits<F>::from_long(eta[i]) *
               (mu[j] + p[j] * field_traits<F>::from_long(eta[j]) * invN);
      });
}

}  // namespace moran
