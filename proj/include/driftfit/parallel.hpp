#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace driftfit {

inline int effective_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(index) for index in [0, n) on `workers` threads. Work is handed out
// in fixed chunks; callers own any result slots, so the outcome does not
// depend on scheduling.
inline void parallel_for(long n, int workers,
                         const std::function<void(long)>& fn,
                         long chunk = 1) {
  workers = effective_workers(workers);
  if (n <= 0) return;
  if (workers <= 1 || n == 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  auto worker = [&]() {
    for (;;) {
      const long begin = next.fetch_add(chunk);
      if (begin >= n) return;
      const long end = std::min(begin + chunk, n);
      for (long i = begin; i < end; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace driftfit
