#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hetfc/rng.hpp"

namespace hetfc {

// Resolves a worker count: explicit value, else HETFORECAST_WORKERS, else
// hardware concurrency.
inline std::size_t resolve_workers(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HETFORECAST_WORKERS")) {
    const long v = std::atol(env);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

template <class T>
struct ReplicationOutcome {
  // results[l] is empty when replication l failed.
  std::vector<std::optional<T>> results;
  std::vector<std::pair<std::size_t, std::string>> failures;

  std::size_t completed() const {
    std::size_t c = 0;
    for (const auto& r : results) c += r.has_value();
    return c;
  }
};

// Runs task(l, stream) for l = 0..count-1 where stream is derived injectively
// from (master_seed, l). Results are stored by replication index and any
// reduction the caller performs over `results` in index order is therefore
// independent of the worker count and scheduling. A throwing replication is
// recorded as a failure without aborting the run.
template <class T, class F>
ReplicationOutcome<T> run_replications(std::size_t count, std::uint64_t master_seed,
                                       std::size_t workers, F&& task) {
  ReplicationOutcome<T> outcome;
  outcome.results.resize(count);
  std::vector<std::vector<std::pair<std::size_t, std::string>>> worker_failures;

  const std::size_t w = std::min(resolve_workers(workers), std::max<std::size_t>(count, 1));
  worker_failures.resize(w);
  std::atomic<std::size_t> next{0};

  auto body = [&](std::size_t worker_id) {
    for (;;) {
      const std::size_t l = next.fetch_add(1);
      if (l >= count) return;
      try {
        RngStream stream = RngStream::derive(master_seed, l);
        outcome.results[l] = task(l, stream);
      } catch (const std::exception& e) {
        worker_failures[worker_id].emplace_back(l, e.what());
      }
    }
  };

  if (w <= 1) {
    body(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(w);
    for (std::size_t i = 0; i < w; ++i) threads.emplace_back(body, i);
    for (auto& t : threads) t.join();
  }

  for (auto& wf : worker_failures)
    for (auto& f : wf) outcome.failures.push_back(std::move(f));
  std::sort(outcome.failures.begin(), outcome.failures.end());
  return outcome;
}

}  // namespace hetfc
