#pragma once

// Internal helper: bounded parallel loop with deterministic result
// placement (workers write only to their own indices). SRKIT_THREADS caps
// the worker count.

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace srkit::detail {

inline int thread_cap() {
  if (const char* env = std::getenv("SRKIT_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : int(hc);
}

template <typename F>
void parallel_for(int n, F&& f) {
  const int workers = std::min(thread_cap(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < n; i += workers) {
          if (failed.load(std::memory_order_relaxed)) return;
          f(i);
        }
      } catch (...) {
        if (!failed.exchange(true)) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace srkit::detail
