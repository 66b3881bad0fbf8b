#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace turbeam {

// Runs fn(begin, end) over contiguous chunks of [0, n) on n_threads workers.
// Chunk boundaries depend only on (n, n_threads), so any writes indexed by
// item stay deterministic.
inline void parallel_for_chunks(std::int64_t n, int n_threads,
                                const std::function<void(std::int64_t, std::int64_t)>& fn) {
  if (n <= 0) return;
  if (n_threads <= 1 || n == 1) {
    fn(0, n);
    return;
  }
  if (n_threads > n) n_threads = static_cast<int>(n);
  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  std::int64_t chunk = (n + n_threads - 1) / n_threads;
  for (int i = 0; i < n_threads; ++i) {
    std::int64_t begin = i * chunk;
    std::int64_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back(fn, begin, end);
  }
  for (auto& w : workers) w.join();
}

// Pairwise (tree) summation over values[begin, end): bit-identical for a
// given range regardless of how the values were produced.
inline double pairwise_sum(const double* values, std::int64_t n) {
  if (n <= 4) {
    double s = 0.0;
    for (std::int64_t i = 0; i < n; ++i) s += values[i];
    return s;
  }
  std::int64_t half = n / 2;
  return pairwise_sum(values, half) + pairwise_sum(values + half, n - half);
}

}  // namespace turbeam
