#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace g2flow {

// Deterministic chunked parallel-for: chunk boundaries depend only on n, so
// per-chunk partial results can be combined in index order regardless of
// thread scheduling.
template <typename F>
void parallel_for(std::size_t n, F&& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw < 2 || n < 4096) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t nchunk = hw;
  std::vector<std::thread> threads;
  threads.reserve(nchunk);
  const std::size_t per = (n + nchunk - 1) / nchunk;
  for (std::size_t c = 0; c < nchunk; ++c) {
    std::size_t lo = c * per, hi = std::min(n, lo + per);
    if (lo >= hi) break;
    threads.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace g2flow
