#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace sifkit::detail {

// Runs fn(i) for i in [0, n) on `workers` threads with a static stride
// partition. Results go to caller-owned slots, so output order never
// depends on scheduling. fn must not throw.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn fn) {
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), std::max<std::size_t>(n, 1));
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (std::size_t t = 0; t < w; ++t)
    pool.emplace_back([&fn, n, w, t] {
      for (std::size_t i = t; i < n; i += w) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace sifkit::detail
