#include "moran/bottleneck.hpp"

#include <algorithm>
#include <functional>

#include "moran/errors.hpp"

namespace moran {

namespace {

// Kuhn's augmenting-path matching restricted to pairs with d[i][j] <= limit.
bool perfect_matching(const std::vector<std::vector<double>>& d, double limit) {
  const int n = static_cast<int>(d.size());
  std::vector<int> match_right(n, -1);
  std::vector<char> visited;

  std::function<bool(int)> try_augment = [&](int left) -> bool {
    for (int right = 0; right < n; ++right) {
      if (visited[right] || d[left][right] > limit) continue;
      visited[right] = 1;
      if (match_right[right] < 0 || try_augment(match_right[right])) {
        match_right[right] = left;
        return true;
      }
    }
    return false;
  };

  for (int left = 0; left < n; ++left) {
    visited.assign(n, 0);
    if (!try_augment(left)) return false;
  }
  return true;
}

}  // namespace

double bottleneck_distance(const std::vector<std::complex<double>>& a,
                           const std::vector<std::complex<double>>& b) {
  if (a.size() != b.size())
    throw argument_error("bottleneck_distance: multisets must have equal size");
  const int n = static_cast<int>(a.size());
  if (n == 0) return 0.0;

  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  std::vector<double> thresholds;
  thresholds.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      d[i][j] = std::abs(a[i] - b[j]);
      thresholds.push_back(d[i][j]);
    }
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  int lo = 0, hi = static_cast<int>(thresholds.size()) - 1;
  while (lo < hi) {
    int mid = (lo + hi) / 2;
    if (perfect_matching(d, thresholds[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return thresholds[lo];
}

}  // namespace moran
