#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace plankline {

/// Worker count used by every parallel map in the library. Defaults to the
/// hardware concurrency; results never depend on it.
void set_thread_count(unsigned count);
unsigned thread_count();

/// Splits [0, count) into contiguous chunks and runs body(chunk, begin, end) for
/// each, concurrently. Chunk boundaries depend only on `count` and `chunks`, so
/// callers that merge per-chunk results in chunk order are deterministic.
template <class Body>
void parallel_chunks(std::size_t count, std::size_t chunks, Body&& body) {
  if (count == 0) return;
  chunks = std::max<std::size_t>(1, std::min(chunks, count));
  auto bounds = [&](std::size_t c) { return count * c / chunks; };
  const unsigned workers = std::min<unsigned>(thread_count(), static_cast<unsigned>(chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c, bounds(c), bounds(c + 1));
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t c = w; c < chunks; c += workers) body(c, bounds(c), bounds(c + 1));
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace plankline
