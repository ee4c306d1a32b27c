#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bfree {

// Runs fn(task) for task in [0, tasks) on up to `threads` workers. Tasks are
// claimed in order; callers reduce per-task results themselves, so the
// outcome never depends on the worker count.
template <typename Fn>
void parallel_tasks(std::size_t tasks, unsigned threads, Fn&& fn) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1U, threads), tasks));
  if (workers <= 1) {
    for (std::size_t t = 0; t < tasks; ++t) fn(t);
    return;
  }
  std::mutex mu;
  std::size_t next = 0;
  std::exception_ptr failure;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t t;
        {
          std::lock_guard lock(mu);
          if (next >= tasks || failure) return;
          t = next++;
        }
        try {
          fn(t);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace bfree
