#include "vbdr/snapshot.hpp"

#include <array>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "vbdr/errors.hpp"

namespace vbdr {

namespace {

constexpr std::array<char, 8> kMagic{'V', 'B', 'D', 'R', 'P', 'O', 'O', 'L'};

template <typename T>
void put(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) {
    throw SnapshotError("truncated snapshot");
  }
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= std::uint64_t{bytes[i]} << (8 * i);
  }
  return static_cast<T>(value);
}

} // namespace

void write_snapshot(std::ostream& out, const BdrPool& pool) {
  const PoolConfig& c = pool.config();
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, c.m);
  put<std::uint32_t>(out, c.b);
  put<std::uint32_t>(out, c.k);
  put<std::uint32_t>(out, c.zbits);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(c.variant));
  put<std::uint32_t>(out, c.seeds.a0);
  put<std::uint32_t>(out, c.seeds.a1);
  put<std::uint64_t>(out, pool.slice_index());
  put<std::uint8_t>(out, pool.begin_pending() ? 1 : 0);
  put<std::uint64_t>(out, pool.drv_words().size());
  for (std::uint64_t w : pool.drv_words()) {
    put<std::uint64_t>(out, w);
  }
  put<std::uint64_t>(out, pool.accumulators().size());
  for (std::uint32_t a : pool.accumulators()) {
    put<std::uint32_t>(out, a);
  }
  if (!out) {
    throw SnapshotError("failed writing snapshot");
  }
}

BdrPool read_snapshot(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) {
    throw SnapshotError("not a pool snapshot");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kSnapshotVersion) {
    throw SnapshotError("unsupported snapshot version " + std::to_string(version));
  }
  PoolConfig c;
  c.m = get<std::uint32_t>(in);
  c.b = get<std::uint32_t>(in);
  c.k = get<std::uint32_t>(in);
  c.zbits = get<std::uint32_t>(in);
  const auto variant = get<std::uint32_t>(in);
  if (variant > static_cast<std::uint32_t>(Variant::drv_direct)) {
    throw SnapshotError("unknown variant tag " + std::to_string(variant));
  }
  c.variant = static_cast<Variant>(variant);
  c.seeds.a0 = get<std::uint32_t>(in);
  c.seeds.a1 = get<std::uint32_t>(in);
  const auto slice_index = get<std::uint64_t>(in);
  const bool pending = get<std::uint8_t>(in) != 0;
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw SnapshotError(std::string("invalid snapshot config: ") + e.what());
  }
  const auto layout = DrvLayout::make(c.ranks(), c.recorder_bits(), c.variant);

  const auto n_words = get<std::uint64_t>(in);
  if (n_words != std::uint64_t{c.m} * layout.words()) {
    throw SnapshotError("DRV word count does not match the configuration");
  }
  std::vector<std::uint64_t> drv(n_words);
  for (auto& w : drv) {
    w = get<std::uint64_t>(in);
  }
  const auto n_acc = get<std::uint64_t>(in);
  if (n_acc != (layout.has_accumulator() ? c.m : 0)) {
    throw SnapshotError("accumulator count does not match the configuration");
  }
  std::vector<std::uint32_t> acc(n_acc);
  for (auto& a : acc) {
    a = get<std::uint32_t>(in);
  }
  return BdrPool::restore(c, slice_index, pending, std::move(drv), std::move(acc));
}

} // namespace vbdr
