#pragma once
// Deterministic parallel replication: replicate k always runs on RNG stream
// stream_base + k regardless of thread count, so results are identical for
// any threading layout and are ordered by replicate index.

#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "crtlab/rng.hpp"

namespace crtlab {

inline size_t resolve_threads(size_t requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// fn: T(CounterRng& rng, size_t replicate). Results come back indexed by
// replicate. The first exception thrown by any replicate is rethrown here.
template <typename T, typename Fn>
std::vector<T> replicate_map(size_t n, size_t threads, uint64_t seed, Fn&& fn,
                             uint64_t stream_base = 0) {
  std::vector<T> results(n);
  const size_t n_threads = std::min(resolve_threads(threads), n > 0 ? n : 1);
  std::exception_ptr error;
  std::mutex error_mu;

  auto worker = [&](size_t t) {
    const size_t lo = n * t / n_threads;
    const size_t hi = n * (t + 1) / n_threads;
    for (size_t k = lo; k < hi; ++k) {
      try {
        CounterRng rng(seed, stream_base + k);
        results[k] = fn(rng, k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  if (n_threads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace crtlab
