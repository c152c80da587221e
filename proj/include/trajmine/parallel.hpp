#pragma once
// Minimal worker-pool helper. TRAJMINE_THREADS caps the worker count.

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace trajmine {

inline unsigned effective_threads(unsigned requested = 0) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TRAJMINE_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return std::max(1u, n);
}

// Runs fn(begin, end) over contiguous slices of [0, total). Slice boundaries
// depend on the thread count but each index is processed exactly once, so
// results are identical for any degree of parallelism as long as workers
// write to disjoint positions.
template <typename Fn>
inline void parallel_chunks(std::size_t total, unsigned threads, Fn&& fn) {
  threads = effective_threads(threads);
  if (total == 0) return;
  if (threads <= 1 || total < 2 * threads) {
    fn(std::size_t{0}, total);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::size_t chunk = (total + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(total, t * chunk);
    const std::size_t end = std::min(total, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (std::thread& th : pool) th.join();
}

} // namespace trajmine
