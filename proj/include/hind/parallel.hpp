#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "hind/util.hpp"

namespace hind {

// Maps f over items with at most max_in_flight invocations outstanding.
// Results keep input order regardless of completion order, so downstream
// reductions are deterministic. Call sites that need per-item error ledgers
// catch inside f; an escaped exception aborts the batch after joining.
template <typename In, typename F>
auto parallel_map(const std::vector<In>& items, F f, int max_in_flight)
    -> std::vector<decltype(f(items[0]))> {
  using Out = decltype(f(items[0]));
  if (max_in_flight < 1) throw ConfigError("max_in_flight must be >= 1");
  std::vector<Out> results(items.size());
  if (items.empty()) return results;

  std::size_t workers = std::min<std::size_t>(max_in_flight, items.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= items.size()) return;
      try {
        results[i] = f(items[i]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(items.size());  // stop issuing new work
        return;
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace hind
