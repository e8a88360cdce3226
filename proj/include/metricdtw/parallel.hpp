#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace metricdtw {

// Static block partition of [0, n) over `threads` workers. Each index is
// visited exactly once and workers write disjoint outputs, so results are
// deterministic regardless of thread count.
template <typename Fn>
void parallelFor(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = n * w / workers;
    const std::size_t hi = n * (w + 1) / workers;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace metricdtw
