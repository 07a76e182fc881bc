#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fbmruin {

/// Seed used everywhere a caller does not pick one.
inline constexpr std::uint64_t kDefaultSeed = 20211123ULL;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stream seed for work unit `index` under `master`. Depends on nothing else,
/// so results do not change with the number of workers.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Runs fn(block) for every block in [0, n_blocks) on up to `threads` workers
/// and returns the per-block results in block order. Callers reduce the
/// vector sequentially, which keeps floating-point sums schedule-independent.
template <class Result, class Fn>
std::vector<Result> run_blocks(std::size_t n_blocks, unsigned threads, Fn&& fn) {
  std::vector<Result> results(n_blocks);
  const unsigned workers =
      static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(threads == 0 ? 1 : threads, n_blocks)));
  if (workers <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) results[b] = fn(b);
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      try {
        results[b] = fn(b);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n_blocks);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace fbmruin
