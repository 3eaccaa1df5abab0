#include "vbdr/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <thread>

#include "vbdr/errors.hpp"

namespace vbdr {

namespace {

void check_workers(unsigned workers) {
  if (workers == 0) {
    throw ConfigError("worker count must be >= 1");
  }
}

// Runs body(w) for w in [0, workers) with workers - 1 extra threads; rethrows
// the first failure after all threads joined.
template <typename Body>
void fan_out(unsigned workers, const Body& body) {
  if (workers == 1) {
    body(0u);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        body(w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  try {
    body(0u);
  } catch (...) {
    errors[0] = std::current_exception();
  }
  for (auto& t : threads) {
    t.join();
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

} // namespace

RangeRunner thread_runner(unsigned workers) {
  check_workers(workers);
  return [workers](std::size_t count, const RangeTask& task) {
    const std::size_t chunks = std::min<std::size_t>(workers, count);
    if (chunks == 0) {
      return;
    }
    fan_out(static_cast<unsigned>(chunks), [&](unsigned w) {
      const std::size_t first = count * w / chunks;
      const std::size_t last = count * (w + 1) / chunks;
      task(first, last);
    });
  };
}

ScanBatch make_batch(std::span<const IpPairEvent> events, const SliceClock& clock, unsigned workers) {
  check_workers(workers);
  if (!events.empty()) {
    const auto slice = clock.slice_of(events.front().ts);
    for (const auto& e : events) {
      if (clock.slice_of(e.ts) != slice) {
        throw StreamOrderError("scan batch spans more than one slice");
      }
    }
  }
  return {events, workers};
}

ScanStats scan_batch(BdrPool& pool, const ScanBatch& batch) {
  check_workers(batch.workers);
  if (pool.config().variant == Variant::serial) {
    throw ContractError("serial pools keep a read-modify-write max and cannot be scanned concurrently");
  }
  const auto start = std::chrono::steady_clock::now();
  pool.open_slice(thread_runner(batch.workers));
  const auto events = batch.events;
  const unsigned workers = batch.workers;
  fan_out(workers, [&](unsigned w) {
    for (std::size_t i = w; i < events.size(); i += workers) {
      pool.scan_concurrent(events[i].aip, events[i].bip);
    }
  });
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  ScanStats stats;
  stats.events = events.size();
  stats.seconds = elapsed.count();
  stats.events_per_second = stats.seconds > 0.0 ? static_cast<double>(stats.events) / stats.seconds : 0.0;
  return stats;
}

void boundary_parallel(BdrPool& pool, unsigned workers) { pool.advance_slice(thread_runner(workers)); }

std::vector<double> estimate_parallel(const BdrPool& pool, std::span<const std::uint32_t> hosts, unsigned workers) {
  check_workers(workers);
  std::vector<double> out(hosts.size(), 0.0);
  if (hosts.empty()) {
    return out;
  }
  const double total = pool.pool_estimate();
  thread_runner(workers)(hosts.size(), [&](std::size_t first, std::size_t last) {
    for (std::size_t i = first; i < last; ++i) {
      out[i] = pool.estimate(hosts[i], total);
    }
  });
  return out;
}

} // namespace vbdr
