#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace permrd {

/// Thread count from PERMRD_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
std::size_t default_thread_count();

/// Calls body(i) for every i in [0, count), splitting the range into
/// contiguous chunks over `threads` workers. Results must be written to
/// per-index storage so the caller can reduce them in index order. The first
/// exception thrown by any worker is rethrown after all workers join.
template <typename Body>
void parallel_for(std::size_t count, std::size_t threads, Body&& body) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  threads = std::min(threads, count);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = count * t / threads;
    const std::size_t end = count * (t + 1) / threads;
    workers.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace permrd
