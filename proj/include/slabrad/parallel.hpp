// Minimal index-parallel loop. Results must be written to per-index slots so
// output never depends on the worker count.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace slabrad {

/// Worker count from SLABRAD_THREADS (0 or unset = hardware concurrency).
inline int worker_count() {
  int n = 0;
  if (const char* env = std::getenv("SLABRAD_THREADS")) n = std::atoi(env);
  if (n <= 0) n = int(std::max(1u, std::thread::hardware_concurrency()));
  return n;
}

/// Calls body(i) for i in [0, n). Rethrows the exception of the lowest failing index.
template <typename Body>
void parallel_for(std::size_t n, Body&& body, int workers = worker_count()) {
  workers = std::max(1, std::min<int>(workers, int(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex guard;
  std::size_t failed_index = n;
  std::exception_ptr failure;
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(guard);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace slabrad
