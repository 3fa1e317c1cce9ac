// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string_view>
#include <thread>
#include <vector>

namespace gweval {

// Worker count: hardware concurrency, capped by the GWEVAL_THREADS
// environment variable when it holds a positive integer.
inline std::size_t worker_count() {
  std::size_t n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("GWEVAL_THREADS")) {
    const std::string_view text(env);
    std::size_t cap = 0;
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), cap);
    if (ec == std::errc() && ptr == text.data() + text.size() && cap >= 1) {
      n = std::min(n, cap);
    }
  }
  return n;
}

// Runs fn(i) for i in [0, n) across worker threads with static
// chunking. Each index must write only to its own output slot; under
// that discipline results are identical for any worker count. The
// first exception thrown by any worker is rethrown after all workers
// join.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::mutex error_mutex;
  std::exception_ptr first_error;
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      const std::size_t begin = t * n / workers;
      const std::size_t end = (t + 1) * n / workers;
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace gweval
