#ifndef ZIPPERLAB_PARALLEL_HPP
#define ZIPPERLAB_PARALLEL_HPP

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace zipperlab {

/// Runs fn(0..n_tasks-1) across a pool of threads (0 = hardware count).
/// Tasks own their outputs by index, so results never depend on scheduling
/// order. The first exception thrown by a task is rethrown to the caller.
inline void parallel_for(int n_tasks, int threads, const std::function<void(int)>& fn) {
  if (n_tasks <= 0) return;
  int n_threads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  if (n_threads > n_tasks) n_threads = n_tasks;

  if (n_threads == 1) {
    for (int i = 0; i < n_tasks; ++i) fn(i);
    return;
  }

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (!failed.load(std::memory_order_relaxed)) {
      const int i = next.fetch_add(1);
      if (i >= n_tasks) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace zipperlab

#endif
