// Deterministic static-partition parallel loop. Each index is handled by exactly
// one worker, so per-index outputs do not depend on the thread count.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace anosov {

namespace detail {
inline std::atomic<int>& thread_setting() {
  static std::atomic<int> n{1};
  return n;
}
}  // namespace detail

inline void set_threads(int n) { detail::thread_setting() = std::max(1, n); }
inline int threads() { return detail::thread_setting(); }

template <class F>
void parallel_for(std::size_t count, F&& body, int nthreads = 0) {
  if (nthreads <= 0) nthreads = threads();
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(nthreads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr first_error;
  std::size_t first_index = count;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      std::size_t i = w;
      try {
        for (; i < count; i += workers) body(i);
      } catch (...) {
        // Keep the failure with the lowest index so errors are thread-count independent.
        std::lock_guard<std::mutex> lock(error_mutex);
        if (i < first_index) {
          first_index = i;
          first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace anosov
