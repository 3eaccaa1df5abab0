#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vbdr/generator.hpp"
#include "vbdr/pool.hpp"
#include "vbdr/stream.hpp"

namespace vbdr {

struct ScanSummary {
  std::uint64_t lines = 0;
  std::uint64_t events = 0;
  std::uint64_t malformed = 0;
  std::uint64_t out_of_order = 0;
  std::uint64_t boundaries = 0;
};

// Streams `ts,aip,bip` lines through a WindowEngine and writes the hosts at or
// above threshold after every boundary as `aip,estimate,window_start,window_end`.
// Bad lines are reported on `log` and skipped. When `snapshot` is set the final
// pool is written to it.
ScanSummary run_scan(std::istream& in, std::ostream& out, std::ostream& log, const EngineConfig& config,
                     double threshold, std::ostream* snapshot = nullptr);

struct BenchRow {
  std::string estimator;
  std::size_t samples = 0;
  double mean_rel_err = 0.0;
  double p50_rel_err = 0.0;
  double p95_rel_err = 0.0;
  double max_rel_err = 0.0;
  std::optional<double> bits_per_counter;
  std::uint64_t total_bits = 0;
  double events_per_sec = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
};

// Replays a generated stream through every VBDR variant, LFPM-HLL and the exact
// oracle, scoring each explicit host with nonzero truth at every boundary.
// The truth window is pool.k; the generator's own k is ignored.
BenchReport run_bench(const GenConfig& gen, const PoolConfig& pool, unsigned workers);

void print_bench(std::ostream& out, const BenchReport& report, bool timing);

} // namespace vbdr
