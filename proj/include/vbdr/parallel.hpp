#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vbdr/event.hpp"
#include "vbdr/pool.hpp"

namespace vbdr {

// Thread-based stand-in for the GPU execution model: scans fan out over worker
// threads, boundaries split the register array into contiguous chunks, and
// estimation splits the host list.

// Same-slice events and the number of workers scanning them.
struct ScanBatch {
  std::span<const IpPairEvent> events;
  unsigned workers = 1;
};

struct ScanStats {
  std::size_t events = 0;
  double seconds = 0.0;
  double events_per_second = 0.0;
};

// Runs a RangeTask over `workers` contiguous chunks, one thread per chunk.
RangeRunner thread_runner(unsigned workers);

// Throws StreamOrderError if the events do not all fall into one slice.
ScanBatch make_batch(std::span<const IpPairEvent> events, const SliceClock& clock, unsigned workers);

// Event i goes to worker i % workers. Opens the slice first (drv_direct).
// Throws ContractError on a serial pool, ConfigError when workers == 0.
ScanStats scan_batch(BdrPool& pool, const ScanBatch& batch);

// advance_slice() with the register array split across workers.
void boundary_parallel(BdrPool& pool, unsigned workers);

std::vector<double> estimate_parallel(const BdrPool& pool, std::span<const std::uint32_t> hosts, unsigned workers);

} // namespace vbdr
