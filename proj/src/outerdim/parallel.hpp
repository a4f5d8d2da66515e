#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace outerdim {

// Worker count: OUTERDIM_THREADS if set and positive, else hardware
// concurrency (at least 1).
unsigned thread_count();

// Splits [0, n) into contiguous blocks, runs `work(begin, end)` for each block
// on up to thread_count() threads and returns the per-block results in block
// order, so reductions over them are deterministic.
template <class Result, class Work>
std::vector<Result> parallel_blocks(std::size_t n, std::size_t blocks_hint, Work&& work) {
  std::size_t blocks = std::max<std::size_t>(1, std::min(n, blocks_hint));
  std::vector<Result> results(blocks);
  if (n == 0) return results;
  auto range = [&](std::size_t b) {
    std::size_t begin = n * b / blocks;
    std::size_t end = n * (b + 1) / blocks;
    return std::pair{begin, end};
  };
  unsigned threads = std::min<unsigned>(thread_count(), static_cast<unsigned>(blocks));
  if (threads <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) {
      auto [lo, hi] = range(b);
      results[b] = work(lo, hi);
    }
    return results;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t b = t; b < blocks; b += threads) {
          auto [lo, hi] = range(b);
          results[b] = work(lo, hi);
        }
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

// Counter-based generator: the i-th draw depends only on (seed, i).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
  std::uint64_t at(std::uint64_t counter) const {
    std::uint64_t z = seed_ + 0x9E3779B97F4A7C15ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t counter, std::uint64_t bound) const {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(at(counter)) * bound) >> 64);
  }
  double unit(std::uint64_t counter) const {
    return static_cast<double>(at(counter) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t seed_;
};

}  // namespace outerdim
