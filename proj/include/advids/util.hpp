#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace advids {

// Run fn(0..count-1) on up to `workers` threads. Each task must be
// independent; results written by index stay deterministic regardless of
// scheduling. The first thrown exception is rethrown after all threads join.
inline void run_parallel(std::size_t count, unsigned workers,
                         const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  unsigned n = workers;
  if (n > count) n = static_cast<unsigned>(count);
  if (n <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(n);
  std::atomic<std::size_t> next{0};
  for (unsigned w = 0; w < n; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= count) break;
          fn(i);
        }
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errs) {
    if (e) std::rethrow_exception(e);
  }
}

inline unsigned default_workers() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

}  // namespace advids
