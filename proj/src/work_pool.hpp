#pragma once

// Fan-out of independent tasks over a fixed number of threads. Results are
// stored by task index, so the output never depends on scheduling.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace dispersolve::detail {

/// DISPERSOLVE_THREADS overrides the hardware count.
inline unsigned pool_size() {
  if (const char* env = std::getenv("DISPERSOLVE_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return std::max(1u, std::min(hw, 16u));
}

template <typename T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& task,
                            unsigned threads = pool_size()) {
  std::vector<T> out(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        out[i] = task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
        return;
      }
    }
  };
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return out;
}

/// Seed for task `index` derived from a base seed (splitmix64 finalizer).
inline std::uint64_t task_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace dispersolve::detail
