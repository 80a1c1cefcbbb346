#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace linklab {

// Worker count for internal parallel loops: hardware concurrency, capped by
// the LINKLAB_THREADS environment variable. set_thread_limit() overrides both.
std::size_t thread_count();

// Exact worker count, even above the hardware count. 0 restores the default.
void set_thread_limit(std::size_t limit);

// Number of chunks parallel_chunks() will use for n items.
inline std::size_t chunk_count(std::size_t n, std::size_t min_chunk = 1024) {
  if (n == 0) return 0;
  return std::clamp<std::size_t>(n / std::max<std::size_t>(1, min_chunk), 1, thread_count());
}

// Runs fn(chunk, begin, end) over contiguous chunks of [0, n), one thread
// per chunk. Callers merge per-chunk results in chunk order, so output never
// depends on scheduling.
template <class Fn>
void parallel_chunks(std::size_t n, Fn&& fn, std::size_t min_chunk = 1024) {
  std::size_t chunks = chunk_count(n, min_chunk);
  if (chunks == 0) return;
  if (chunks == 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> threads;
  threads.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    std::size_t begin = n * c / chunks;
    std::size_t end = n * (c + 1) / chunks;
    threads.emplace_back([&, c, begin, end] {
      try {
        fn(c, begin, end);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace linklab
