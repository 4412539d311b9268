#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace peskine {

/// Default worker count: $PESKINE_THREADS if set and positive, else hardware concurrency.
unsigned default_threads();

/// Splits [0, total) into `chunks` contiguous ranges whose boundaries depend only on
/// (total, chunks), runs `body(begin, end)` for each on up to `threads` workers, and
/// returns the per-chunk results in chunk order. The caller folds them sequentially,
/// so any fold is independent of the worker count.
template <class Body>
auto parallel_chunks(std::uint64_t total, unsigned threads, Body&& body, std::size_t chunks = 256)
    -> std::vector<decltype(body(std::uint64_t{}, std::uint64_t{}))> {
  using R = decltype(body(std::uint64_t{}, std::uint64_t{}));
  if (chunks == 0) chunks = 1;
  if (total < chunks) chunks = total == 0 ? 1 : static_cast<std::size_t>(total);
  std::vector<R> out(chunks);
  auto bound = [&](std::size_t c) { return total / chunks * c + std::min<std::uint64_t>(c, total % chunks); };
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    try {
      for (std::size_t c; (c = next.fetch_add(1)) < chunks;) out[c] = body(bound(c), bound(c + 1));
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next.store(chunks);
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace peskine
