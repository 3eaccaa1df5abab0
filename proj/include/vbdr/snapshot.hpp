#pragma once

#include <iosfwd>

#include "vbdr/pool.hpp"

namespace vbdr {

// Versioned little-endian dump of a pool:
//   "VBDRPOOL" | u32 version | u32 m, b, k, zbits, variant, a0, a1
//   | u64 slice_index | u8 begin_pending | u64 n, u64[n] drv words | u64 n, u32[n] accumulators
inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(std::ostream& out, const BdrPool& pool);
// Throws SnapshotError on a bad magic, unknown version, truncation or invalid config.
BdrPool read_snapshot(std::istream& in);

} // namespace vbdr
