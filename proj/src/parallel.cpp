#include "dmsp/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dmsp {

namespace {
thread_local bool inside_worker = false;
}

void parallel_for(int count, double flops_per_item,
                  const std::function<void(int)>& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  if (inside_worker || hw < 2 || count < 2 || flops_per_item * count < 2e7) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  unsigned n_threads = std::min<unsigned>(hw, static_cast<unsigned>(count));
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (unsigned w = 0; w < n_threads; ++w)
    pool.emplace_back([&] {
      inside_worker = true;
      try {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(count);  // stop handing out work
      }
    });
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace dmsp
