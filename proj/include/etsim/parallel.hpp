#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace etsim {

/// Trials are processed in fixed blocks of this size. Block boundaries do not
/// depend on the thread count, which keeps reductions bit-identical.
inline constexpr std::size_t kTrialBlock = 1024;

/// Runs fn(begin, end) for consecutive blocks covering [0, n) on up to
/// `threads` workers and returns the per-block results in block order.
template <class Fn>
auto run_blocks(std::size_t n, int threads, Fn&& fn, std::size_t block = kTrialBlock)
    -> std::vector<decltype(fn(std::size_t{}, std::size_t{}))> {
  using Partial = decltype(fn(std::size_t{}, std::size_t{}));
  const std::size_t n_blocks = (n + block - 1) / block;
  std::vector<std::optional<Partial>> slots(n_blocks);
  auto collect = [&] {
    std::vector<Partial> partials;
    partials.reserve(n_blocks);
    for (auto& s : slots) partials.push_back(std::move(*s));
    return partials;
  };
  if (n_blocks == 0) return {};

  const std::size_t workers =
      std::min<std::size_t>(n_blocks, static_cast<std::size_t>(std::max(threads, 1)));
  auto run_block = [&](std::size_t b) {
    const std::size_t begin = b * block;
    slots[b].emplace(fn(begin, std::min(n, begin + block)));
  };
  if (workers == 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
    return collect();
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t b = next++; b < n_blocks; b = next++) {
        try {
          run_block(b);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n_blocks;
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
  return collect();
}

}  // namespace etsim
