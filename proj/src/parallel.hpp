#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qoegap::detail {

inline std::size_t worker_count(std::size_t work_items) {
  const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  return std::clamp<std::size_t>(work_items / 64, 1, hw);
}

// Runs fn(acc, item) for item in [0, count) across worker threads, each with
// its own accumulator copied from init. Returns the per-worker accumulators;
// callers must reduce them with an order-independent operation.
template <class Acc, class Fn>
std::vector<Acc> parallel_accumulate(std::size_t count, const Acc& init, Fn fn) {
  const std::size_t workers = worker_count(count);
  std::vector<Acc> accs(workers, init);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(accs[0], i);
    return accs;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(accs[w], i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
  return accs;
}

}  // namespace qoegap::detail
