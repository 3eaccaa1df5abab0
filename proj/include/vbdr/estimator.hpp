#pragma once

#include <cstddef>
#include <span>

namespace vbdr {

// True for register counts the HLL bias constant is tabulated for:
// 16, 32, 64, or a power of two >= 128.
bool hll_size_supported(std::size_t s) noexcept;

double hll_alpha(std::size_t s);

// Plain HyperLogLog estimate over one vector of ranks, with the linear-counting
// small-range correction. Throws std::invalid_argument for unsupported sizes.
double raw_hll_estimate(std::span<const unsigned> ranks);

// Virtual-register-sharing estimate for one host: its g-register virtual
// estimate corrected by the pool-wide estimate over m registers, clamped at 0.
//   (m g / (m - g)) * (host_estimate / g - pool_estimate / m)
double shared_register_estimate(double host_estimate, std::size_t g, double pool_estimate, std::size_t m);

} // namespace vbdr
