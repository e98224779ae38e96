#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace elimgame::detail {

/// Hands chunk ids 0..chunks-1 to `workers` threads; fn(worker, chunk).
/// The first exception thrown by any worker is rethrown here.
template <class Fn>
void run_chunks(std::size_t workers, std::uint64_t chunks, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min<std::uint64_t>(workers, chunks));
  if (workers == 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) fn(std::size_t{0}, c);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (auto c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) fn(w, c);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(chunks);
        }
      });
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace elimgame::detail
