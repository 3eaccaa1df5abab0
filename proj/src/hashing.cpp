#include "vbdr/hashing.hpp"

#include <stdexcept>

namespace vbdr {

std::uint32_t hash32(std::uint32_t x, std::uint64_t n, std::uint32_t seed) {
  if (n == 0) {
    throw std::invalid_argument("hash32: modulus must be >= 1");
  }
  std::uint32_t t = x ^ seed;
  t ^= t >> 16;
  t *= 0x85EBCA6Bu;
  t ^= t >> 13;
  t *= 0xC2B2AE35u;
  t ^= t >> 16;
  return static_cast<std::uint32_t>(t % n);
}

std::uint32_t left_bits(std::uint32_t x, unsigned i) {
  if (i > 32) {
    throw std::out_of_range("left_bits: width must be in [0, 32]");
  }
  if (i == 0) {
    return 0;
  }
  return static_cast<std::uint32_t>(std::uint64_t{x} >> (32 - i));
}

std::uint32_t phy_idx(std::uint32_t aip, std::uint32_t vidx, std::uint32_t a0, std::uint32_t m) {
  const std::uint32_t s1 = hash32(vidx, kFullRange, a0);
  return hash32(aip, m, s1);
}

ScanTarget locate_pair(std::uint32_t aip, std::uint32_t bip, unsigned b, std::uint32_t m, const HashSeed& seeds) {
  const std::uint32_t mixed = hash32(bip, kFullRange, seeds.a1);
  const std::uint32_t vidx = left_bits(mixed, b);
  const std::uint32_t rest = mixed << b;
  return {phy_idx(aip, vidx, seeds.a0, m), lbp1(rest, 32 - b)};
}

} // namespace vbdr
