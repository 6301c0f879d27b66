#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace osid::detail {

// Runs fn(block) for every block in [0, nblocks) on up to `workers` threads.
// Blocks are claimed from a shared counter; fn must only touch block-local
// state so results are identical for any worker count.
inline void run_blocks(size_t nblocks, int workers, const std::function<void(size_t)>& fn) {
  if (workers <= 1 || nblocks <= 1) {
    for (size_t b = 0; b < nblocks; ++b) fn(b);
    return;
  }
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  auto body = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const size_t b = next.fetch_add(1);
      if (b >= nblocks) return;
      try {
        fn(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  const size_t nthreads = std::min<size_t>(workers, nblocks);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (size_t t = 0; t < nthreads; ++t) pool.emplace_back(body);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace osid::detail
