#pragma once

#include <complex>
#include <vector>

namespace moran {

/**
 * Eigenvalues of a dense real matrix (row-major, n x n), complex pairs
 * included.  Balancing, Hessenberg reduction and Francis double-shift QR;
 * eigenvalues only, no vectors.  Throws numeric_error on non-convergence.
 */
std::vector<std::complex<double>> dense_eigenvalues(std::vector<double> a, int n);

std::vector<std::complex<double>> dense_eigenvalues(const std::vector<std::vector<double>>& a);

}  // namespace moran
