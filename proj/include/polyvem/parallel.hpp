#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace polyvem {

/// Number of worker threads used by parallel_for; 0 means hardware
/// concurrency.
inline std::size_t& worker_count() {
  static std::size_t n = 0;
  return n;
}

/// Calls fn(i) for i in [0, n) on a pool of threads. The first exception
/// thrown by any call is rethrown after all workers join. Callers must write
/// results into per-index slots to keep output deterministic.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  std::size_t workers = worker_count() ? worker_count() : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t + 1 < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace polyvem
