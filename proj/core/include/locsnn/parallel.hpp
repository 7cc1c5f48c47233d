#pragma once

#include <thread>
#include <vector>

namespace locsnn {

/// Runs fn(i) for every i in [0, n) on up to `jobs` threads. Each index owns
/// its own output slot, so results are position-addressed and never depend
/// on scheduling; callers reduce them in index order for determinism.
template <typename Fn>
void parallel_for_indexed(int n, int jobs, Fn&& fn) {
  if (n <= 0) return;
  if (jobs <= 1 || n == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  const int workers = std::min(jobs, n);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) fn(i);
    });
  }
  for (std::thread& t : threads) t.join();
}

}  // namespace locsnn
