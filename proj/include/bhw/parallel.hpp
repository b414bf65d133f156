// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace bhw {

/// Environment variable consulted for the default worker count.
inline constexpr const char* kThreadsEnv = "BHW_THREADS";

inline int default_thread_count() {
  if (const char* env = std::getenv(kThreadsEnv)) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 4096) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs job(i) for i in [0, jobs) on up to `threads` workers. Jobs are handed
/// out dynamically; the first exception is rethrown after all workers stop.
template <class Job>
void run_jobs(std::size_t jobs, int threads, Job&& job) {
  if (jobs == 0) return;
  const std::size_t workers = std::min<std::size_t>(std::max(1, threads), jobs);
  if (workers == 1) {
    for (std::size_t i = 0; i < jobs; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs || stop.load()) return;
      try {
        job(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        stop.store(true);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

/// Deterministic parallel reduction over [0, n).
///
/// The range is cut into fixed chunks; each chunk is folded sequentially into
/// its own accumulator, and the partials are merged in chunk order. The
/// result therefore depends on `chunk` but not on `threads`.
template <class Acc, class Body, class Merge>
Acc chunked_fold(std::size_t n, std::size_t chunk, int threads, const Acc& init, Body&& body, Merge&& merge) {
  chunk = std::max<std::size_t>(1, chunk);
  const std::size_t chunks = (n + chunk - 1) / chunk;
  std::vector<Acc> partial(chunks, init);
  run_jobs(chunks, threads, [&](std::size_t c) {
    const std::size_t begin = c * chunk;
    body(partial[c], begin, std::min(n, begin + chunk));
  });
  Acc total = init;
  for (const auto& p : partial) merge(total, p);
  return total;
}

/// out[i] = fn(i), computed in parallel.
template <class R, class Fn>
std::vector<R> parallel_map(std::size_t n, int threads, Fn&& fn) {
  std::vector<R> out(n);
  run_jobs(n, threads, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace bhw
