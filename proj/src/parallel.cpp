#include "msn/parallel.hpp"

namespace msn {

namespace {
std::atomic<std::size_t> g_threads{1};
}

void set_thread_count(std::size_t n) { g_threads = n < 1 ? 1 : n; }
std::size_t thread_count() { return g_threads; }

bool& in_parallel_worker() {
  thread_local bool flag = false;
  return flag;
}

}  // namespace msn
