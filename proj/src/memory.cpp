#include "vbdr/memory.hpp"

#include <bit>
#include <cmath>
#include <ostream>

namespace vbdr {

std::uint64_t bdr_bits(Variant variant, unsigned b, unsigned k) {
  const std::uint64_t ranks = 32 - b;
  const std::uint64_t drv = ranks * min_zbits(k);
  switch (variant) {
  case Variant::serial:
    // ceil(log2 L) bits for the scalar slice max
    return static_cast<std::uint64_t>(std::bit_width(ranks - 1)) + drv;
  case Variant::bitset:
    return ranks + drv;
  case Variant::drv_direct:
    return drv;
  }
  return drv;
}

double lfpm_bits(double n_per_counter) { return n_per_counter > 1.0 ? 40.0 * std::log(n_per_counter) : 0.0; }

MemoryReport memory_report(const PoolConfig& config) {
  MemoryReport r;
  r.ranks = config.ranks();
  r.min_zbits = min_zbits(config.k);
  r.storage_zbits = config.recorder_bits();
  const auto layout = DrvLayout::make(r.ranks, r.storage_zbits, config.variant);
  r.recorders_per_word = layout.per_word();
  r.serial_bits = bdr_bits(Variant::serial, config.b, config.k);
  r.gfast_bits = bdr_bits(Variant::bitset, config.b, config.k);
  r.gsmall_bits = bdr_bits(Variant::drv_direct, config.b, config.k);
  r.register_bits = bdr_bits(config.variant, config.b, config.k);
  r.total_bits = r.register_bits * config.m;
  r.storage_register_bits = std::uint64_t{layout.words()} * 64 + (layout.has_accumulator() ? 32 : 0);
  r.storage_total_bits = r.storage_register_bits * config.m;
  return r;
}

void print_memory_report(std::ostream& out, const PoolConfig& config, const MemoryReport& report,
                         double n_per_counter) {
  out << "variant," << variant_name(config.variant) << '\n'
      << "m," << config.m << '\n'
      << "b," << config.b << '\n'
      << "k," << config.k << '\n'
      << "drv_length," << report.ranks << '\n'
      << "min_zbits," << report.min_zbits << '\n'
      << "storage_zbits," << report.storage_zbits << '\n'
      << "recorders_per_word," << report.recorders_per_word << '\n'
      << "bits_per_bdr_serial," << report.serial_bits << '\n'
      << "bits_per_bdr_gfast," << report.gfast_bits << '\n'
      << "bits_per_bdr_gsmall," << report.gsmall_bits << '\n'
      << "bits_per_bdr," << report.register_bits << '\n'
      << "total_bits," << report.total_bits << '\n'
      << "storage_bits_per_bdr," << report.storage_register_bits << '\n'
      << "storage_total_bits," << report.storage_total_bits << '\n'
      << "lfpm_n_per_counter," << n_per_counter << '\n'
      << "lfpm_bits_per_counter," << lfpm_bits(n_per_counter) << '\n';
}

} // namespace vbdr
