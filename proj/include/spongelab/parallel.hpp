#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace spongelab {

inline unsigned worker_count() {
  if (const char* env = std::getenv("SPONGELAB_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return unsigned(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Dynamic chunked parallel loop over [0, count). Results must be written
// into per-index slots (or merged associatively) so the outcome does not
// depend on the thread count. body(begin, end) handles one chunk and may
// keep chunk-local scratch.
inline void parallel_chunks(uint64_t count, uint64_t chunk,
                            const std::function<void(uint64_t, uint64_t)>& body) {
  unsigned workers = worker_count();
  if (count == 0) return;
  if (workers <= 1 || count <= chunk) {
    for (uint64_t lo = 0; lo < count; lo += chunk)
      body(lo, std::min(count, lo + chunk));
    return;
  }
  std::atomic<uint64_t> next{0};
  auto run = [&] {
    for (;;) {
      uint64_t lo = next.fetch_add(chunk);
      if (lo >= count) return;
      body(lo, std::min(count, lo + chunk));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned i = 1; i < workers; ++i) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

inline void parallel_for(uint64_t count, const std::function<void(uint64_t)>& fn) {
  parallel_chunks(count, 256, [&](uint64_t lo, uint64_t hi) {
    for (uint64_t i = lo; i < hi; ++i) fn(i);
  });
}

}  // namespace spongelab
