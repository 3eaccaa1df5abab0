#include "vbdr/bdr.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <stdexcept>
#include <string>

#include "vbdr/errors.hpp"

namespace vbdr {

std::string_view variant_name(Variant v) noexcept {
  switch (v) {
  case Variant::serial:
    return "serial";
  case Variant::bitset:
    return "gfast";
  case Variant::drv_direct:
    return "gsmall";
  }
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) noexcept {
  if (name == "serial") {
    return Variant::serial;
  }
  if (name == "gfast" || name == "bitset") {
    return Variant::bitset;
  }
  if (name == "gsmall" || name == "drv-direct" || name == "drv_direct") {
    return Variant::drv_direct;
  }
  return std::nullopt;
}

unsigned min_zbits(unsigned k) {
  // ceil(log2(k + 1))
  return static_cast<unsigned>(std::bit_width(k));
}

unsigned default_zbits(unsigned k) {
  const unsigned z = min_zbits(k);
  for (unsigned w : {2u, 4u, 8u, 16u}) {
    if (z <= w) {
      return w;
    }
  }
  return z;
}

DistanceRecorder::DistanceRecorder(unsigned zbits) : zbits_(zbits), value_(0) {
  if (zbits == 0 || zbits > DrvLayout::kMaxZbits) {
    throw ConfigError("distance recorder width must be in [1, 16], got " + std::to_string(zbits));
  }
  init();
}

DrvLayout DrvLayout::make(unsigned ranks, unsigned zbits, Variant variant) {
  if (ranks == 0 || ranks > kMaxRanks) {
    throw ConfigError("DRV length must be in [1, 31], got " + std::to_string(ranks));
  }
  if (zbits == 0 || zbits > kMaxZbits) {
    throw ConfigError("recorder width must be in [1, 16], got " + std::to_string(zbits));
  }
  return DrvLayout{ranks, zbits, variant};
}

std::vector<std::uint64_t> DrvLayout::sentinel_words() const {
  std::vector<std::uint64_t> out(words(), 0);
  for (unsigned slot = 0; slot < ranks; ++slot) {
    out[slot / per_word()] |= field_mask() << ((slot % per_word()) * zbits);
  }
  return out;
}

namespace {

void check_rank(const DrvLayout& layout, unsigned rank) {
  if (rank == 0 || rank > layout.ranks) {
    throw std::out_of_range("rank " + std::to_string(rank) + " outside [1, " + std::to_string(layout.ranks) + "]");
  }
}

struct FieldPos {
  unsigned word;
  unsigned shift;
};

FieldPos position(const DrvLayout& layout, unsigned rank) noexcept {
  const unsigned slot = rank - 1;
  return {slot / layout.per_word(), (slot % layout.per_word()) * layout.zbits};
}

} // namespace

unsigned recorder_value(const DrvLayout& layout, std::span<const std::uint64_t> drv, unsigned rank) {
  check_rank(layout, rank);
  const auto [word, shift] = position(layout, rank);
  return static_cast<unsigned>((drv[word] >> shift) & layout.field_mask());
}

unsigned windowed_lbp1(const DrvLayout& layout, std::span<const std::uint64_t> drv, unsigned k) {
  for (unsigned rank = layout.ranks; rank >= 1; --rank) {
    const auto [word, shift] = position(layout, rank);
    if (((drv[word] >> shift) & layout.field_mask()) < k) {
      return rank;
    }
  }
  return 0;
}

void BdrView::record(unsigned rank) {
  check_rank(layout_, rank);
  switch (layout_.variant) {
  case Variant::serial:
    *acc_ = std::max(*acc_, static_cast<std::uint32_t>(rank));
    break;
  case Variant::bitset:
    std::atomic_ref<std::uint32_t>(*acc_).fetch_or(std::uint32_t{1} << (rank - 1), std::memory_order_relaxed);
    break;
  case Variant::drv_direct:
    set_recorder_zero(rank);
    break;
  }
}

void BdrView::end_slice_update() {
  if (layout_.variant == Variant::drv_direct) {
    throw ContractError("end_slice_update called on a DRV-direct register");
  }
  slide_all();
  unsigned top = 0;
  if (layout_.variant == Variant::serial) {
    top = *acc_;
  } else {
    top = static_cast<unsigned>(std::bit_width(*acc_));
  }
  if (top > 0) {
    set_recorder_zero(top);
  }
  *acc_ = 0;
}

void BdrView::begin_slice_update() {
  if (layout_.variant != Variant::drv_direct) {
    throw ContractError("begin_slice_update called on a register with a slice accumulator");
  }
  slide_all();
}

unsigned BdrView::recorder(unsigned rank) const { return recorder_value(layout_, drv_, rank); }

void BdrView::load_recorder(unsigned rank, unsigned value) {
  check_rank(layout_, rank);
  if (value > layout_.sentinel()) {
    throw std::out_of_range("recorder value exceeds " + std::to_string(layout_.sentinel()));
  }
  const auto [word, shift] = position(layout_, rank);
  drv_[word] = (drv_[word] & ~(layout_.field_mask() << shift)) | (std::uint64_t{value} << shift);
}

void BdrView::reset() {
  const auto fresh = layout_.sentinel_words();
  std::copy(fresh.begin(), fresh.end(), drv_.begin());
  if (acc_ != nullptr) {
    *acc_ = 0;
  }
}

void BdrView::slide_all() noexcept {
  const std::uint64_t mask = layout_.field_mask();
  const unsigned per_word = layout_.per_word();
  unsigned remaining = layout_.ranks;
  for (auto& word : drv_) {
    const unsigned fields = std::min(per_word, remaining);
    remaining -= fields;
    for (unsigned f = 0; f < fields; ++f) {
      const unsigned shift = f * layout_.zbits;
      if (((word >> shift) & mask) != mask) {
        word += std::uint64_t{1} << shift;
      }
    }
  }
}

void BdrView::set_recorder_zero(unsigned rank) noexcept {
  const auto [word, shift] = position(layout_, rank);
  std::atomic_ref<std::uint64_t>(drv_[word]).fetch_and(~(layout_.field_mask() << shift), std::memory_order_relaxed);
}

Bdr::Bdr(const DrvLayout& layout) : layout_(layout), drv_(layout.sentinel_words()) {}

unsigned Bdr::recorder(unsigned rank) const { return recorder_value(layout_, drv_, rank); }

} // namespace vbdr
