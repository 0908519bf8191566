#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tcurv {

// Worker-count cap shared by every parallel_for; 0 means use the hardware
// concurrency.  Results never depend on the value, only wall time does.
inline std::atomic<int>& parallel_jobs() {
  static std::atomic<int> jobs{0};
  return jobs;
}

// Runs f(i) for i in [0, n) on a small thread pool.  Each index is touched
// exactly once and callers must write only to disjoint slots, so results do
// not depend on the schedule.  The first exception thrown by any worker is
// rethrown after all workers join.
template <class F>
void parallel_for(int n, F&& f, int min_grain = 512) {
  if (n <= 0) return;
  int workers = parallel_jobs().load();
  if (workers <= 0) {
    unsigned hw = std::thread::hardware_concurrency();
    workers = static_cast<int>(hw == 0 ? 1 : hw);
  }
  workers = std::min<int>(workers, (n + min_grain - 1) / min_grain);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  int chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    int lo = w * chunk;
    int hi = std::min(n, lo + chunk);
    pool.emplace_back([&, lo, hi]() {
      try {
        for (int i = lo; i < hi; ++i) f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace tcurv
