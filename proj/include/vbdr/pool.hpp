#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "vbdr/bdr.hpp"
#include "vbdr/hashing.hpp"

namespace vbdr {

struct PoolConfig {
  std::uint32_t m = 1u << 16; // physical registers
  unsigned b = 9;             // g = 2^b virtual registers per host
  unsigned k = 300;           // window length in slices
  unsigned zbits = 0;         // recorder width; 0 selects default_zbits(k)
  Variant variant = Variant::drv_direct;
  HashSeed seeds{};

  [[nodiscard]] std::uint32_t g() const noexcept { return std::uint32_t{1} << b; }
  [[nodiscard]] unsigned ranks() const noexcept { return 32 - b; }
  [[nodiscard]] unsigned recorder_bits() const { return zbits != 0 ? zbits : default_zbits(k); }

  // Throws ConfigError on: b outside [1, 31], k == 0, 2g > m, zbits below
  // ceil(log2(k+1)) or above 16.
  void validate() const;
  // Both g and m have a tabulated HLL constant, so estimate() can run.
  [[nodiscard]] bool can_estimate() const noexcept;

  friend bool operator==(const PoolConfig&, const PoolConfig&) = default;
};

// Applies task over [0, count) split into contiguous ranges. Pools call this for
// every per-register boundary pass so the caller decides how it is executed.
using RangeTask = std::function<void(std::size_t first, std::size_t last)>;
using RangeRunner = std::function<void(std::size_t count, const RangeTask& task)>;

void run_serial(std::size_t count, const RangeTask& task);

// m physical BDRs shared by all hosts. Each host reads a virtual vector of g of
// them chosen by phy_idx.
//
// Phases alternate: scans (concurrent for bitset/drv_direct, after open_slice),
// then an exclusive boundary (advance_slice), then read-only queries.
//
// For drv_direct the begin-of-slice slide is deferred until the slice is opened
// by its first scan, or applied at its close if the slice saw no scans. Readouts
// at a boundary therefore see the same recorder ages as the serial variant.
class BdrPool {
public:
  explicit BdrPool(const PoolConfig& config);

  [[nodiscard]] const PoolConfig& config() const noexcept { return config_; }
  [[nodiscard]] const DrvLayout& layout() const noexcept { return layout_; }
  [[nodiscard]] std::uint32_t size() const noexcept { return config_.m; }
  [[nodiscard]] std::uint32_t g() const noexcept { return config_.g(); }
  // Completed slices.
  [[nodiscard]] std::uint64_t slice_index() const noexcept { return slice_index_; }
  [[nodiscard]] bool begin_pending() const noexcept { return begin_pending_; }

  [[nodiscard]] ScanTarget locate(std::uint32_t aip, std::uint32_t bip) const noexcept;

  // Opens the slice if needed, then records. Single caller only.
  void scan_pair(std::uint32_t aip, std::uint32_t bip);
  // Requires an open slice (see open_slice). Safe for concurrent callers on
  // bitset and drv_direct pools.
  void scan_concurrent(std::uint32_t aip, std::uint32_t bip);
  void record(const ScanTarget& target);

  // Applies a pending drv_direct begin-of-slice update. No-op otherwise.
  void open_slice(const RangeRunner& run = run_serial);

  // Closes the open slice.
  void advance_slice(const RangeRunner& run = run_serial);
  // Equivalent to `count` advance_slice() calls; stops touching registers once
  // every recorder must have saturated.
  void advance_slices(std::uint64_t count);

  [[nodiscard]] unsigned register_lbp1(std::size_t index) const;
  [[nodiscard]] std::uint64_t sum_lbp1(std::uint32_t aip) const;
  [[nodiscard]] std::vector<unsigned> gather_registers(std::uint32_t aip) const;
  [[nodiscard]] std::vector<unsigned> all_registers() const;

  // Plain HLL estimate over all m registers; shared by every host estimate at a boundary.
  [[nodiscard]] double pool_estimate() const;
  [[nodiscard]] double estimate(std::uint32_t aip) const;
  [[nodiscard]] double estimate(std::uint32_t aip, double pool_estimate) const;

  [[nodiscard]] BdrView reg(std::size_t index);

  [[nodiscard]] std::span<const std::uint64_t> drv_words() const noexcept { return drv_; }
  [[nodiscard]] std::span<const std::uint32_t> accumulators() const noexcept { return acc_; }

  // Rebuilds a pool from raw state (snapshots). Throws SnapshotError on size mismatch.
  static BdrPool restore(const PoolConfig& config, std::uint64_t slice_index, bool begin_pending,
                         std::vector<std::uint64_t> drv, std::vector<std::uint32_t> acc);

  friend bool operator==(const BdrPool&, const BdrPool&) = default;

private:
  [[nodiscard]] std::span<const std::uint64_t> drv_of(std::size_t index) const noexcept;
  void check_estimable() const;

  PoolConfig config_;
  DrvLayout layout_;
  std::vector<std::uint64_t> drv_;
  std::vector<std::uint32_t> acc_;
  std::uint64_t slice_index_ = 0;
  bool begin_pending_ = true;
};

} // namespace vbdr
