#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace moran {

/// Worker count: hardware concurrency capped by the MORAN_THREADS environment variable.
unsigned worker_count();

/// Runs fn(i) for i in [0, n) across workers; fn must be thread-safe.
template <class Fn>
void parallel_for(std::int64_t n, Fn&& fn) {
  const unsigned workers = worker_count();
  if (n <= 1 || workers <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto body = [&] {
    for (;;) {
      std::int64_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const unsigned count = static_cast<unsigned>(std::min<std::int64_t>(workers, n));
  pool.reserve(count - 1);
  for (unsigned w = 1; w < count; ++w) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
}

}  // namespace moran
