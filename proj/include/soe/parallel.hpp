#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace soe {

// Splits [0, n) into contiguous blocks, one per worker. Each index is
// processed exactly once with a fixed per-index computation, so results do
// not depend on the number of threads.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t, std::size_t)>& body) {
  if (threads <= 1 || n < 2) {
    body(0, n);
    return;
  }
  std::size_t nworkers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::size_t chunk = (n + nworkers - 1) / nworkers;
  std::vector<std::thread> pool;
  pool.reserve(nworkers);
  for (std::size_t w = 0; w < nworkers; ++w) {
    std::size_t lo = w * chunk;
    std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace soe
