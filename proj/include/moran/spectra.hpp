#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "moran/field.hpp"
#include "moran/generator.hpp"
#include "moran/simplex.hpp"

namespace moran {

/// Function on E_{K,N} as a value vector indexed by state rank.
template <class F>
struct SimplexFunction {
  std::shared_ptr<const StateSpace> space;
  std::vector<F> values;
};

struct SpectrumEntry {
  std::complex<double> value;
  std::int64_t multiplicity = 0;
  std::vector<std::string> labels;
};

/// Multiset of eigenvalues with multiplicities and provenance labels.
class SpectrumCatalog {
 public:
  void add(std::complex<double> value, std::int64_t multiplicity = 1, std::string label = "");

  /// Merges entries whose values coincide within `tol` (absolute).
  SpectrumCatalog aggregated(double tol = 1e-9) const;

  const std::vector<SpectrumEntry>& entries() const& { return entries_; }
  // rvalue overload keeps range-for over a temporary catalog well defined
  std::vector<SpectrumEntry> entries() && { return std::move(entries_); }
  std::int64_t total_multiplicity() const;

  /// Eigenvalues repeated according to multiplicity.
  std::vector<std::complex<double>> expanded() const;

  /// Sorted (value asc by real then imag) copy, mainly for printing and export.
  SpectrumCatalog sorted() const;

 private:
  std::vector<SpectrumEntry> entries_;
};

std::string composition_label(const Composition& eta);

/// Spectrum of the pure-mutation generator from the nonzero eigenvalues of Q:
/// {0} plus lambda_eta = sum_k eta(k) lambda_k over eta in U_{L=1..N} E_{K-1,L}.
SpectrumCatalog predicted_spectrum_mutation(const std::vector<std::complex<double>>& nonzero_eigs,
                                            int K, int N);

/// Spectrum of the reproduction generator: {0 x K} plus -L(L-1) with
/// multiplicity C(K+L-2, L) for 2 <= L <= N.
SpectrumCatalog predicted_spectrum_reproduction(int K, int N);

/// Spectrum of the full model: lambda_eta - (p/N) |eta| (|eta|-1).
SpectrumCatalog predicted_spectrum_moran(const std::vector<std::complex<double>>& nonzero_eigs,
                                         int K, int N, double p);

/// Dense eigensolve of the generator, every eigenvalue with multiplicity 1.
SpectrumCatalog brute_spectrum(const GeneratorMatrix<double>& G, std::int64_t dim_cap = 5000);

/// Dense eigensolve of an arbitrary square matrix.
SpectrumCatalog brute_spectrum_dense(const std::vector<std::vector<double>>& A);

/// Bottleneck-matching distance between two expanded catalogs.
double spectra_distance(const SpectrumCatalog& a, const SpectrumCatalog& b);

/**
 * Spectral gap: min over nonzero eigenvalues of -Re(lambda).  One eigenvalue
 * closest to zero is treated as the structural zero of the generator and
 * excluded.  Throws on an all-zero catalog.
 */
double spectral_gap(const SpectrumCatalog& cat);

/// Gap of Q versus gap of the full-model generator built from it, compared within tol.
bool verify_slem_equality(const MutationMatrix<double>& Q, int N, double p, double tol = 1e-9);

/// The K-1 nonzero eigenvalues of Q (the one closest to zero is dropped).
std::vector<std::complex<double>> nonzero_mutation_eigenvalues(const MutationMatrix<double>& Q);

// --- symmetrised tensor eigenfunctions --------------------------------------

/**
 * The function xi~(V_1, ..., V_L) on E_{K,N}: base case
 * xi~(V)(eta) = sum_j V(j) eta(j); higher orders by the product-minus-Hadamard
 * recursion, memoised on the multiset of argument vectors.
 */
template <class F>
SimplexFunction<F> xi_tilde(const std::vector<std::vector<F>>& vectors,
                            std::shared_ptr<const StateSpace> space);

/**
 * Right eigenfunction of the mutation/full generator for index eta in
 * E_{K-1,L}: xi~ applied to the multiset {U_k repeated eta(k)}.  `eigenvectors`
 * holds the available right eigenvectors U_1..U_r of Q (without U_0); eta must
 * not reference indices >= r.
 */
template <class F>
SimplexFunction<F> eigenfunction(const Composition& eta,
                                 const std::vector<std::vector<F>>& eigenvectors,
                                 std::shared_ptr<const StateSpace> space);

// --- implementation ----------------------------------------------------------

namespace detail {

template <class F>
std::string vector_fingerprint(const std::vector<F>& v);

template <>
inline std::string vector_fingerprint<Rational>(const std::vector<Rational>& v) {
  std::string s;
  for (const auto& x : v) {
    s += to_string(x);
    s += ',';
  }
  return s;
}

template <>
inline std::string vector_fingerprint<double>(const std::vector<double>& v) {
  std::string s;
  char buf[32];
  for (double x : v) {
    std::snprintf(buf, sizeof buf, "%a,", x);
    s += buf;
  }
  return s;
}

template <>
inline std::string vector_fingerprint<std::complex<double>>(
    const std::vector<std::complex<double>>& v) {
  std::string s;
  char buf[64];
  for (const auto& x : v) {
    std::snprintf(buf, sizeof buf, "%a,%a;", x.real(), x.imag());
    s += buf;
  }
  return s;
}

template <class F>
std::string multiset_key(const std::vector<std::vector<F>>& vectors) {
  std::vector<std::string> parts;
  parts.reserve(vectors.size());
  for (const auto& v : vectors) parts.push_back(vector_fingerprint(v));
  std::sort(parts.begin(), parts.end());
  std::string key;
  for (auto& p : parts) {
    key += p;
    key += '|';
  }
  return key;
}

template <class F>
const std::vector<F>& xi_tilde_memo(const std::vector<std::vector<F>>& vectors,
                                    const StateSpace& space,
                                    std::map<std::string, std::vector<F>>& memo) {
  std::string key = multiset_key(vectors);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;

  const std::int64_t n = space.size();
  std::vector<F> out(n, field_traits<F>::from_long(0));
  const int L = static_cast<int>(vectors.size());
  if (L == 1) {
    const auto& v = vectors[0];
    for (std::int64_t r = 0; r < n; ++r) {
      const Composition& eta = space.state(r);
      F acc = field_traits<F>::from_long(0);
      for (int j = 0; j < space.K(); ++j) acc += v[j] * field_traits<F>::from_long(eta[j]);
      out[r] = acc;
    }
  } else {
    std::vector<std::vector<F>> head(vectors.begin(), vectors.end() - 1);
    const auto& last = vectors.back();
    const auto& a = xi_tilde_memo(head, space, memo);
    const auto& b = xi_tilde_memo(std::vector<std::vector<F>>{last}, space, memo);
    for (std::int64_t r = 0; r < n; ++r) out[r] = a[r] * b[r];
    for (int i = 0; i + 1 < L; ++i) {
      auto reduced = head;
      for (int j = 0; j < space.K(); ++j) reduced[i][j] = head[i][j] * last[j];
      const auto& corr = xi_tilde_memo(reduced, space, memo);
      for (std::int64_t r = 0; r < n; ++r) out[r] -= corr[r];
    }
  }
  return memo.emplace(std::move(key), std::move(out)).first->second;
}

}  // namespace detail

template <class F>
SimplexFunction<F> xi_tilde(const std::vector<std::vector<F>>& vectors,
                            std::shared_ptr<const StateSpace> space) {
  const int L = static_cast<int>(vectors.size());
  if (L < 1) throw argument_error("xi_tilde: need at least one vector");
  if (L > space->N()) throw argument_error("xi_tilde: more vectors than particles");
  for (const auto& v : vectors)
    if (static_cast<int>(v.size()) != space->K())
      throw argument_error("xi_tilde: vector length must be K");
  std::map<std::string, std::vector<F>> memo;
  SimplexFunction<F> f;
  f.space = space;
  f.values = detail::xi_tilde_memo(vectors, *space, memo);
  return f;
}

template <class F>
SimplexFunction<F> eigenfunction(const Composition& eta,
                                 const std::vector<std::vector<F>>& eigenvectors,
                                 std::shared_ptr<const StateSpace> space) {
  if (static_cast<int>(eta.size()) != space->K() - 1)
    throw argument_error("eigenfunction: index must lie in E_{K-1,L}");
  int L = 0;
  for (std::size_t k = 0; k < eta.size(); ++k) {
    if (eta[k] < 0) throw argument_error("eigenfunction: negative index entry");
    if (eta[k] > 0 && k >= eigenvectors.size())
      throw argument_error("eigenfunction: index uses an unavailable eigenvector");
    L += eta[k];
  }
  if (L > space->N()) throw argument_error("eigenfunction: |eta| exceeds N");

  SimplexFunction<F> f;
  f.space = space;
  if (L == 0) {
    f.values.assign(space->size(), field_traits<F>::from_long(1));
    return f;
  }
  std::vector<std::vector<F>> args;
  args.reserve(L);
  for (std::size_t k = 0; k < eta.size(); ++k)
    for (int c = 0; c < eta[k]; ++c) args.push_back(eigenvectors[k]);
  return xi_tilde(args, std::move(space));
}

}  // namespace moran
