#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "vbdr/pool.hpp"

namespace vbdr {

// One list entry: slice number (4 bytes) and rank (1 byte).
struct LfpmCell {
  std::uint32_t slice = 0;
  std::uint8_t rank = 0;

  friend bool operator==(const LfpmCell&, const LfpmCell&) = default;
};

// List of future possible maxima: the variable-size sliding-window register
// that a BDR replaces. From head to tail, slices strictly increase and ranks
// strictly decrease, so the head is always the current window maximum.
class LfpmList {
public:
  static constexpr unsigned kCellBits = 40;

  // Drops every tail cell the new one dominates. A rank no larger than one
  // already recorded for the same slice is itself dominated and dropped.
  // Throws StreamOrderError if slice goes backwards.
  void insert(std::int64_t slice, unsigned rank);

  // Largest rank with slice > now - k, or 0. Prunes expired head cells.
  unsigned query(std::int64_t now, unsigned k);

  [[nodiscard]] std::size_t size() const noexcept { return cells_.size(); }
  [[nodiscard]] const std::deque<LfpmCell>& cells() const noexcept { return cells_; }
  [[nodiscard]] std::uint64_t bits() const noexcept { return kCellBits * cells_.size(); }

private:
  std::deque<LfpmCell> cells_;
};

// LFPM-HLL with the same virtual-register sharing as BdrPool: m lists, hosts
// read g of them through phy_idx, estimates use the shared-register formula.
class LfpmPool {
public:
  explicit LfpmPool(const PoolConfig& config);

  void scan_pair(std::int64_t slice, std::uint32_t aip, std::uint32_t bip);

  // Readouts for the window ending at slice `now` (inclusive).
  std::vector<unsigned> gather_registers(std::uint32_t aip, std::int64_t now);
  std::vector<unsigned> all_registers(std::int64_t now);
  double estimate(std::uint32_t aip, std::int64_t now);
  double estimate(std::uint32_t aip, std::int64_t now, double pool_estimate);
  double pool_estimate(std::int64_t now);

  // Mean cells per list after pruning to the window ending at `now`.
  double mean_cells(std::int64_t now);

  [[nodiscard]] const PoolConfig& config() const noexcept { return config_; }

private:
  PoolConfig config_;
  std::vector<LfpmList> lists_;
};

} // namespace vbdr
