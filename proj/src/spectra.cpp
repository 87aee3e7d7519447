#include "moran/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "moran/bottleneck.hpp"
#include "moran/dense_eig.hpp"

namespace moran {

void SpectrumCatalog::add(std::complex<double> value, std::int64_t multiplicity,
                          std::string label) {
  if (multiplicity <= 0) throw argument_error("SpectrumCatalog: multiplicity must be positive");
  SpectrumEntry e;
  e.value = value;
  e.multiplicity = multiplicity;
  if (!label.empty()) e.labels.push_back(std::move(label));
  entries_.push_back(std::move(e));
}

SpectrumCatalog SpectrumCatalog::aggregated(double tol) const {
  SpectrumCatalog out;
  auto sorted_entries = entries_;
  std::sort(sorted_entries.begin(), sorted_entries.end(), [](const auto& a, const auto& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  for (const auto& e : sorted_entries) {
    bool merged = false;
    if (!out.entries_.empty()) {
      auto& last = out.entries_.back();
      if (std::abs(last.value - e.value) <= tol) {
        last.multiplicity += e.multiplicity;
        last.labels.insert(last.labels.end(), e.labels.begin(), e.labels.end());
        merged = true;
      }
    }
    if (!merged) out.entries_.push_back(e);
  }
  return out;
}

std::int64_t SpectrumCatalog::total_multiplicity() const {
  std::int64_t total = 0;
  for (const auto& e : entries_) total += e.multiplicity;
  return total;
}

std::vector<std::complex<double>> SpectrumCatalog::expanded() const {
  std::vector<std::complex<double>> out;
  out.reserve(total_multiplicity());
  for (const auto& e : entries_)
    for (std::int64_t i = 0; i < e.multiplicity; ++i) out.push_back(e.value);
  return out;
}

SpectrumCatalog SpectrumCatalog::sorted() const {
  SpectrumCatalog out = *this;
  std::sort(out.entries_.begin(), out.entries_.end(), [](const auto& a, const auto& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return out;
}

std::string composition_label(const Composition& eta) {
  std::string s = "(";
  for (std::size_t i = 0; i < eta.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(eta[i]);
  }
  s += ")";
  return s;
}

SpectrumCatalog predicted_spectrum_mutation(const std::vector<std::complex<double>>& nonzero_eigs,
                                            int K, int N) {
  return predicted_spectrum_moran(nonzero_eigs, K, N, 0.0);
}

SpectrumCatalog predicted_spectrum_moran(const std::vector<std::complex<double>>& nonzero_eigs,
                                         int K, int N, double p) {
  if (K < 2) throw argument_error("predicted spectrum: K must be >= 2");
  if (N < 1) throw argument_error("predicted spectrum: N must be >= 1");
  if (p < 0) throw argument_error("predicted spectrum: p must be >= 0");
  if (static_cast<int>(nonzero_eigs.size()) != K - 1)
    throw argument_error("predicted spectrum: need exactly K-1 nonzero eigenvalues of Q");
  SpectrumCatalog cat;
  cat.add(0.0, 1, "zero");
  for (int L = 1; L <= N; ++L) {
    StateSpace idx(K - 1, L);
    for (std::int64_t r = 0; r < idx.size(); ++r) {
      const Composition& eta = idx.state(r);
      std::complex<double> lam = 0.0;
      for (int k = 0; k < K - 1; ++k) lam += static_cast<double>(eta[k]) * nonzero_eigs[k];
      lam -= p / N * static_cast<double>(L) * (L - 1);
      cat.add(lam, 1, composition_label(eta));
    }
  }
  return cat.aggregated();
}

SpectrumCatalog predicted_spectrum_reproduction(int K, int N) {
  if (K < 2 || N < 2) throw argument_error("predicted reproduction spectrum: need K >= 2, N >= 2");
  SpectrumCatalog cat;
  cat.add(0.0, K, "zero");
  for (int L = 2; L <= N; ++L) {
    BigInt mult = binomial(K + L - 2, L);
    cat.add(-static_cast<double>(L) * (L - 1), mult.get_si(), "L=" + std::to_string(L));
  }
  return cat;
}

SpectrumCatalog brute_spectrum_dense(const std::vector<std::vector<double>>& A) {
  SpectrumCatalog cat;
  for (const auto& z : dense_eigenvalues(A)) cat.add(z, 1);
  return cat;
}

SpectrumCatalog brute_spectrum(const GeneratorMatrix<double>& G, std::int64_t dim_cap) {
  if (G.dim() > dim_cap) throw capacity_error("brute_spectrum: dimension exceeds cap");
  return brute_spectrum_dense(G.dense());
}

double spectra_distance(const SpectrumCatalog& a, const SpectrumCatalog& b) {
  return bottleneck_distance(a.expanded(), b.expanded());
}

double spectral_gap(const SpectrumCatalog& cat) {
  auto values = cat.expanded();
  if (values.empty()) throw argument_error("spectral_gap: empty catalog");
  std::size_t zero_at = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (std::abs(values[i]) < std::abs(values[zero_at])) zero_at = i;
  values.erase(values.begin() + static_cast<std::ptrdiff_t>(zero_at));
  if (values.empty()) throw numeric_error("spectral_gap: catalog has no nonzero eigenvalue");
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& z : values) gap = std::min(gap, -z.real());
  if (!(gap > 0)) throw numeric_error("spectral_gap: degenerate catalog (nonpositive gap)");
  return gap;
}

std::vector<std::complex<double>> nonzero_mutation_eigenvalues(const MutationMatrix<double>& Q) {
  auto eig = dense_eigenvalues(Q.dense());
  std::size_t zero_at = 0;
  for (std::size_t i = 1; i < eig.size(); ++i)
    if (std::abs(eig[i]) < std::abs(eig[zero_at])) zero_at = i;
  eig.erase(eig.begin() + static_cast<std::ptrdiff_t>(zero_at));
  return eig;
}

bool verify_slem_equality(const MutationMatrix<double>& Q, int N, double p, double tol) {
  auto qcat = brute_spectrum_dense(Q.dense());
  auto g = build_moran_generator(Q, N, p);
  auto gcat = brute_spectrum(g);
  return std::fabs(spectral_gap(qcat) - spectral_gap(gcat)) <= tol;
}

}  // namespace moran
