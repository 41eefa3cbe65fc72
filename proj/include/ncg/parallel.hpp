#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ncg {

/// Worker-count capability handed to library routines by the caller. Results
/// never depend on the thread count.
struct Parallelism {
  unsigned threads = 1;

  static Parallelism hardware() {
    return {std::max(1u, std::thread::hardware_concurrency())};
  }
};

/// Runs body(i) for i in [0, count) on up to `par.threads` workers. Indices
/// are claimed dynamically; the first exception thrown is rethrown.
template <class Body>
void parallel_for(std::size_t count, Parallelism par, Body&& body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, par.threads), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace ncg
