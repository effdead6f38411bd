#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace sgo {

/// Chunked parallel loop over [0, n). Each index is processed exactly once;
/// callers write results into pre-sized slots so assembly order stays
/// deterministic regardless of thread count. The first exception thrown by
/// any worker is rethrown on the calling thread. threads = 0 picks the
/// hardware parallelism.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         unsigned threads = 0) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::exception_ptr error;
  std::atomic<bool> has_error{false};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (std::size_t i = t; i < n && !has_error.load(std::memory_order_relaxed);
             i += threads) {
          fn(i);
        }
      } catch (...) {
        if (!has_error.exchange(true)) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace sgo
