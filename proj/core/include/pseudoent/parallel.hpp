#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pseudoent {

/// Worker cap: min(hardware threads, PSEUDOENT_THREADS when set).
inline int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) {
    hw = 1;
  }
  if (const char* env = std::getenv("PSEUDOENT_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1 && cap < hw) {
      hw = cap;
    }
  }
  return hw;
}

/// Index-parallel loop. Each index is processed exactly once and results
/// must be written to index-addressed slots, so the outcome is identical
/// to a sequential run regardless of scheduling.
inline void parallel_for(std::size_t count,
                         const std::function<void(std::size_t)>& body) {
  const int workers = worker_count();
  if (workers <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) {
      body(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int spawn = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(workers), count));
  pool.reserve(static_cast<std::size_t>(spawn));
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < spawn; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) {
          return;
        }
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) {
            error = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

}  // namespace pseudoent
