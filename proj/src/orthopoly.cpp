#include "moran/orthopoly.hpp"

namespace moran {

std::vector<Composition> poly_indices(int K, int n) {
  if (K < 2) throw argument_error("poly_indices: K must be >= 2");
  StateSpace idx(K - 1, n);
  return idx.states();
}

bool is_nek(const Composition& x, int N, int* k_out) {
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] == N) {
      if (k_out) *k_out = static_cast<int>(k);
      return true;
    }
    if (x[k] != 0) return false;
  }
  return false;
}

}  // namespace moran
