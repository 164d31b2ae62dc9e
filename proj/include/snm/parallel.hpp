#ifndef SNM_PARALLEL_HPP
#define SNM_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace snm {

namespace detail {
inline std::atomic<unsigned>& thread_override() {
  static std::atomic<unsigned> n{0};
  return n;
}
}  // namespace detail

/// Force the worker count (0 restores the default).
inline void set_worker_count(unsigned n) { detail::thread_override().store(n); }

/// Worker count: explicit override, then SNM_THREADS, then hardware concurrency.
inline unsigned worker_count() {
  if (unsigned n = detail::thread_override().load(); n > 0) return n;
  if (const char* env = std::getenv("SNM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for every i in [0, count). Work items are independent; callers
/// store results by index and reduce them afterwards in index order, so the
/// outcome never depends on the number of workers.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace snm

#endif  // SNM_PARALLEL_HPP
