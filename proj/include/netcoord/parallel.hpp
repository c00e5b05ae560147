#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace netcoord {

// Runs body(i) for i in [begin, end) on a small worker pool. Work items must
// not share mutable state; exceptions are collected and the first rethrown.
template <typename F>
void parallel_for(int begin, int end, int jobs, F&& body) {
  if (end <= begin) return;
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  int workers = jobs > 0 ? jobs : (hw > 0 ? hw : 4);
  if (workers > end - begin) workers = end - begin;
  if (workers <= 1) {
    for (int i = begin; i < end; ++i) body(i);
    return;
  }

  std::atomic<int> next(begin);
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= end) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace netcoord
