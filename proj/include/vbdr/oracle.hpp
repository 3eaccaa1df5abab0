#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "vbdr/stream.hpp"

namespace vbdr {

// Exact sliding-window cardinalities: one aip -> {bip} map per slice, keeping
// the most recent `retain` slices.
class ExactOracle {
public:
  explicit ExactOracle(std::size_t retain);

  // Throws StreamOrderError if slice goes backwards.
  void ingest(std::int64_t slice, std::uint32_t aip, std::uint32_t bip);

  // Distinct bips of aip over the inclusive window. Throws std::out_of_range if
  // the window starts before the oldest retained slice.
  [[nodiscard]] std::uint64_t cardinality(std::uint32_t aip, const SliceWindow& window) const;

  // Number of stored (slice, aip, bip) entries.
  [[nodiscard]] std::uint64_t entries() const noexcept;

private:
  struct Slice {
    std::int64_t index;
    std::unordered_map<std::uint32_t, std::unordered_set<std::uint32_t>> hosts;
  };

  std::size_t retain_;
  std::int64_t latest_ = -1;
  std::deque<Slice> ring_;
};

} // namespace vbdr
