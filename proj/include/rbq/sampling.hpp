#pragma once

// Seeded randomness and deterministic chunked parallelism.

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "rbq/groups.hpp"

namespace rbq {

std::uint64_t splitmix64(std::uint64_t& state);

/// Seed for chunk `index` of stream `stream`; independent of worker count.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform on (0, 1].
  double uniform_open() { return 1.0 - uniform(); }
  double normal();
  double log_uniform(double lo, double hi);
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

  Vec2 gaussian_vec();
  Vec2 sphere();
  /// Uniform in the closed unit ball of C^2.
  Vec2 ball();

private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// RBQ_WORKERS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs fn(chunk_index, begin, end) over [0, total) in fixed-size chunks on a
/// pool of workers; results come back in chunk order.
template <class Partial, class Fn>
std::vector<Partial> run_chunks(std::size_t total, std::size_t chunk, Fn fn) {
  if (chunk == 0) chunk = 1;
  const std::size_t chunks = (total + chunk - 1) / chunk;
  std::vector<Partial> results(chunks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < chunks; c = next++) {
      const std::size_t begin = c * chunk;
      const std::size_t end = std::min(total, begin + chunk);
      results[c] = fn(c, begin, end);
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(worker_count(), static_cast<unsigned>(chunks)));
  if (workers <= 1) {
    worker();
    return results;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (unsigned i = 0; i < workers; ++i) {
    pool.emplace_back([&] {
      try {
        worker();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = chunks;
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace rbq
