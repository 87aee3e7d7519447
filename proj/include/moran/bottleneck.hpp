#pragma once

#include <complex>
#include <vector>

namespace moran {

/**
 * Bottleneck matching distance between two equal-size multisets of complex
 * numbers: the smallest threshold t such that a perfect matching exists using
 * only pairs with |z - w| <= t.  Binary search over the candidate thresholds,
 * feasibility by augmenting-path bipartite matching.
 */
double bottleneck_distance(const std::vector<std::complex<double>>& a,
                           const std::vector<std::complex<double>>& b);

}  // namespace moran
