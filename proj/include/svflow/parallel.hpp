#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace svflow {

// Runs fn(i) for i in [0, count) across hardware threads. Results must be
// written to disjoint slots so the outcome is schedule-independent. The first
// exception thrown by a worker is rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::ptrdiff_t count, Fn&& fn) {
  if (count <= 0) return;
  const unsigned hw = std::thread::hardware_concurrency();
  const std::ptrdiff_t workers =
      std::min<std::ptrdiff_t>(count, hw == 0 ? 1 : hw);
  if (workers <= 1) {
    for (std::ptrdiff_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (std::ptrdiff_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::ptrdiff_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace svflow
