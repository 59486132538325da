#include "simplexdiff/parallel.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace simplexdiff {

void parallel_chunks(int n, int threads, const std::function<void(int, int)>& worker) {
  threads = std::max(1, threads);
  if (threads == 1 || n <= 1) {
    worker(0, n);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto guarded = [&](int lo, int hi) {
    try {
      worker(lo, hi);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int lo = t * chunk, hi = std::min(n, (t + 1) * chunk);
    if (lo < hi) pool.emplace_back(guarded, lo, hi);
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace simplexdiff
