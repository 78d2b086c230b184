#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace robust {

// Static partition of [0, n) into `jobs` chunks; worker w handles chunk w.
// Results are combined in chunk order, so the outcome is independent of
// scheduling. Exceptions are rethrown on the caller thread.
template <class Result, class Work, class Combine>
Result parallel_chunks(std::int64_t n, int jobs, Result init, Work work, Combine combine) {
  if (jobs < 1) jobs = 1;
  if (jobs == 1 || n <= 1) {
    Result r = init;
    combine(r, work(0, n));
    return r;
  }
  if (jobs > n) jobs = static_cast<int>(n);
  std::vector<Result> partial(jobs, init);
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> threads;
  threads.reserve(jobs);
  const std::int64_t chunk = (n + jobs - 1) / jobs;
  for (int w = 0; w < jobs; ++w) {
    threads.emplace_back([&, w] {
      const std::int64_t lo = w * chunk;
      const std::int64_t hi = std::min(n, lo + chunk);
      if (lo >= hi) return;
      try {
        partial[w] = work(lo, hi);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  Result r = init;
  for (int w = 0; w < jobs; ++w) combine(r, std::move(partial[static_cast<std::size_t>(w)]));
  return r;
}

}  // namespace robust
