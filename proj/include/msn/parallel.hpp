#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace msn {

// Global worker count used by parallel_map. Values below 1 are clamped to 1.
void set_thread_count(std::size_t n);
std::size_t thread_count();

// True on threads spawned by parallel_map; nested calls then run inline.
bool& in_parallel_worker();

// Evaluates fn(i) for i in [0, n) and stores the results by index, so the
// output never depends on the schedule. The first exception (by index) is
// rethrown after all workers finish.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn) {
  std::vector<T> out(n);
  std::size_t workers = in_parallel_worker() ? 1 : std::min(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto work = [&] {
    bool saved = in_parallel_worker();
    in_parallel_worker() = true;
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    in_parallel_worker() = saved;
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w + 1 < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace msn
