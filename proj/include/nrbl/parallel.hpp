#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nrbl {

inline unsigned default_workers() {
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [begin, end) on up to `workers` threads. Work is
/// split into contiguous index ranges; callers write results by index, so
/// output never depends on the worker count. The first exception thrown by
/// any worker is rethrown.
template <class Body>
void parallel_for(std::size_t begin, std::size_t end, unsigned workers, Body&& body) {
  if (end <= begin) return;
  const std::size_t count = end - begin;
  workers = static_cast<unsigned>(std::clamp<std::size_t>(workers, 1, count));
  if (workers == 1) {
    for (std::size_t i = begin; i < end; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t lo = begin + count * w / workers;
      const std::size_t hi = begin + count * (w + 1) / workers;
      pool.emplace_back([&, lo, hi] {
        try {
          for (std::size_t i = lo; i < hi; ++i) body(i);
        } catch (...) {
          std::scoped_lock lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace nrbl
