#pragma once

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace redundis {

// Worker cap: hardware concurrency, clamped by REDUNDIS_THREADS when set.
inline int worker_count(int requested = 0) {
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (const char* env = std::getenv("REDUNDIS_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1 && cap < workers) workers = cap;
  }
  if (requested >= 1 && requested < workers) workers = requested;
  return workers;
}

// Splits [0, n) into contiguous chunks, one worker thread each. The callback
// receives (chunk index, begin, end); chunk count and boundaries are
// deterministic for a given worker count.
inline void parallel_chunks(
    uint64_t n, int workers,
    const std::function<void(int, uint64_t, uint64_t)>& body) {
  if (n == 0) return;
  if (workers > static_cast<int>(n)) workers = static_cast<int>(n);
  if (workers <= 1) {
    body(0, 0, n);
    return;
  }
  std::vector<std::thread> threads;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (int c = 0; c < workers; ++c) {
    uint64_t begin = n * c / workers;
    uint64_t end = n * (c + 1) / workers;
    threads.emplace_back([&, c, begin, end]() {
      try {
        body(c, begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Deterministic counter-based mixing for per-trial random draws.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double keyed_u01(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
  uint64_t x = splitmix64(seed ^ 0x5bf0363546e94bd3ULL);
  x = splitmix64(x ^ splitmix64(a));
  x = splitmix64(x ^ splitmix64(b));
  x = splitmix64(x ^ splitmix64(c));
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace redundis
