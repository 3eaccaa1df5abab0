#pragma once

#include <cstdint>

namespace vbdr {

inline constexpr std::uint64_t kFullRange = std::uint64_t{1} << 32;

struct HashSeed {
  std::uint32_t a0 = 0x5EED0001; // virtual index -> physical register
  std::uint32_t a1 = 0x5EED0002; // opposite host mixing

  friend bool operator==(const HashSeed&, const HashSeed&) = default;
};

// 32-bit avalanche finalizer (murmur3 fmix32 over x ^ seed), reduced modulo n.
// n == 2^32 returns the full mixed word. Throws std::invalid_argument for n == 0.
std::uint32_t hash32(std::uint32_t x, std::uint64_t n, std::uint32_t seed);

// The top i bits of x; i == 0 yields 0. Throws std::out_of_range for i > 32.
std::uint32_t left_bits(std::uint32_t x, unsigned i);

// 1-based position of the leftmost set bit, counted from bit 31. Saturates at
// `width` when the top `width` bits are all zero.
constexpr unsigned lbp1(std::uint32_t v, unsigned width) noexcept {
  unsigned pos = 1;
  for (std::uint32_t probe = 0x80000000u; probe != 0 && (v & probe) == 0; probe >>= 1) {
    ++pos;
  }
  return pos < width ? pos : width;
}

// Physical register backing virtual slot `vidx` of host `aip` in a pool of m registers.
std::uint32_t phy_idx(std::uint32_t aip, std::uint32_t vidx, std::uint32_t a0, std::uint32_t m);

// Where an <aip, bip> pair lands: the physical register and the rank recorded there.
struct ScanTarget {
  std::uint32_t index;
  unsigned rank;

  friend bool operator==(const ScanTarget&, const ScanTarget&) = default;
};

// b is the virtual-vector log size (g = 2^b), m the pool size.
ScanTarget locate_pair(std::uint32_t aip, std::uint32_t bip, unsigned b, std::uint32_t m, const HashSeed& seeds);

} // namespace vbdr
