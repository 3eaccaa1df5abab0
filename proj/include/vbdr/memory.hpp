#pragma once

#include <cstdint>
#include <iosfwd>

#include "vbdr/bdr.hpp"
#include "vbdr/pool.hpp"

namespace vbdr {

// Logical size of one BDR in bits, with L = 32 - b and z = ceil(log2(k+1)):
//   serial:     ceil(log2 L) + L*z
//   bitset:     L + L*z
//   drv_direct: L*z
std::uint64_t bdr_bits(Variant variant, unsigned b, unsigned k);

// Average size of one list-of-future-possible-maxima counter holding
// n_per_counter inserts: 40 bits per cell, ln(n) cells.
double lfpm_bits(double n_per_counter);

struct MemoryReport {
  unsigned ranks = 0;           // L
  unsigned min_zbits = 0;       // ceil(log2(k+1))
  unsigned storage_zbits = 0;   // recorder width actually allocated
  unsigned recorders_per_word = 0;
  std::uint64_t serial_bits = 0;
  std::uint64_t gfast_bits = 0;
  std::uint64_t gsmall_bits = 0;
  std::uint64_t register_bits = 0;         // closed form for the configured variant
  std::uint64_t total_bits = 0;            // m * register_bits
  std::uint64_t storage_register_bits = 0; // packed 64-bit DRV words + 32-bit accumulator
  std::uint64_t storage_total_bits = 0;
};

MemoryReport memory_report(const PoolConfig& config);

void print_memory_report(std::ostream& out, const PoolConfig& config, const MemoryReport& report,
                         double n_per_counter);

} // namespace vbdr
