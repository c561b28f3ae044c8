#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace regseq {

/// Splits [0, n) into `chunks` contiguous ranges and runs body(chunk, begin,
/// end) for each on up to `threads` workers. Chunk boundaries depend only on
/// n and chunks, never on the thread count, so callers that merge per-chunk
/// results in chunk order get identical output for any `threads`.
template <typename Body>
void parallel_chunks(std::size_t n, std::size_t chunks, unsigned threads, Body&& body) {
  chunks = std::max<std::size_t>(1, std::min(chunks, std::max<std::size_t>(n, 1)));
  const auto bounds = [&](std::size_t c) { return n * c / chunks; };
  threads = std::max(1u, threads);
  if (threads == 1 || chunks == 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c, bounds(c), bounds(c + 1));
    return;
  }
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::jthread> pool;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, chunks));
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < chunks; c += workers) {
        try {
          body(c, bounds(c), bounds(c + 1));
        } catch (...) {
          errors[c] = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace regseq
