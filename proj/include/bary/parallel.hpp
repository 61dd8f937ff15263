#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace bary {

// Worker count: hardware concurrency, capped by the BARYCENTER_THREADS
// environment variable when set (minimum 1 either way).
inline int thread_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("BARYCENTER_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1 && cap < 1024) hw = std::min(hw, static_cast<int>(cap));
  }
  return hw;
}

// Runs fn(begin, end) over a partition of [0, n) across worker threads.
// Serial when one worker suffices; exceptions propagate from the calling
// thread's own chunk (worker chunks must not throw).
template <class Fn>
void parallel_for(long long n, Fn&& fn, int workers = 0) {
  if (workers <= 0) workers = thread_count();
  workers = static_cast<int>(std::min<long long>(workers, std::max(1LL, n)));
  if (n <= 0) return;
  if (workers == 1) {
    fn(0LL, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  const long long chunk = (n + workers - 1) / workers;
  for (int w = 1; w < workers; ++w) {
    long long lo = w * chunk;
    long long hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  fn(0LL, std::min(n, chunk));
  for (auto& t : pool) t.join();
}

}  // namespace bary
