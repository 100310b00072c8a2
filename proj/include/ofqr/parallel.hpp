#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace ofqr {

inline int default_jobs() {
  const unsigned n = std::thread::hardware_concurrency();
  return n ? static_cast<int>(n) : 1;
}

/// Static partition of [0,n) over `jobs` workers. Callers must write only to
/// disjoint per-index slots; the result is then independent of the worker
/// count. The first exception thrown by any worker is rethrown on the caller.
template <class Fn>
void parallel_for(int n, int jobs, Fn&& fn) {
  if (n <= 0) return;
  jobs = std::clamp(jobs, 1, n);
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(jobs);
  auto run = [&](int w) {
    const int lo = static_cast<int>(static_cast<long long>(n) * w / jobs);
    const int hi = static_cast<int>(static_cast<long long>(n) * (w + 1) / jobs);
    try {
      for (int i = lo; i < hi; ++i) fn(i);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(jobs - 1);
  for (int w = 1; w < jobs; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace ofqr
