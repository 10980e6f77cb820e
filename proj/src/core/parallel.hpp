#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace bellsim {

inline unsigned resolve_thread_count(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs fn(chunk_index, begin, end) over a partition of [0, count) using the
// requested number of workers. Callers are responsible for making results
// independent of the partition (per-index outputs, integer reductions, or
// reductions combined in chunk order).
template <class Fn>
void parallel_chunks(std::uint64_t count, unsigned threads, Fn&& fn) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(resolve_thread_count(threads),
                                                    count == 0 ? 1 : count));
  if (workers <= 1) {
    fn(0u, std::uint64_t{0}, count);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::uint64_t base = count / workers;
  const std::uint64_t extra = count % workers;
  std::uint64_t begin = 0;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t len = base + (w < extra ? 1 : 0);
    const std::uint64_t end = begin + len;
    pool.emplace_back([&fn, w, begin, end] { fn(w, begin, end); });
    begin = end;
  }
}

}  // namespace bellsim
