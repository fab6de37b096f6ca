#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace wasstv {

/// Chunked map over [begin, end): body(lo, hi) is called on disjoint
/// subranges. Outputs must not overlap between ranges, so the result is
/// bit-identical for every thread count; reductions stay in sequential code.
template <typename F>
void parallel_for(std::int64_t begin, std::int64_t end, int threads, F&& body) {
  const std::int64_t n = end - begin;
  if (n <= 0) return;
  if (threads <= 1 || n < 4096) {
    body(begin, end);
    return;
  }
  const int nthreads = static_cast<int>(std::min<std::int64_t>(threads, n));
  const std::int64_t chunk = (n + nthreads - 1) / nthreads;
  std::vector<std::thread> pool;
  pool.reserve(nthreads - 1);
  for (int t = 1; t < nthreads; ++t) {
    const std::int64_t lo = begin + t * chunk;
    const std::int64_t hi = std::min(end, lo + chunk);
    if (lo < hi) pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  body(begin, std::min(end, begin + chunk));
  for (auto& th : pool) th.join();
}

}  // namespace wasstv
