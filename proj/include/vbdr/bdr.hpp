#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace vbdr {

// How a register accumulates the ranks seen during the open slice.
//   serial     - scalar running max (nowLBP1); single writer only
//   bitset     - one bit per rank, atomic OR; "gfast"
//   drv_direct - no accumulator, records zero the recorder directly; "gsmall"
enum class Variant : std::uint8_t { serial, bitset, drv_direct };

std::string_view variant_name(Variant v) noexcept;
std::optional<Variant> parse_variant(std::string_view name) noexcept;

// Smallest recorder width that can hold every age in [0, k] next to the sentinel.
unsigned min_zbits(unsigned k);
// min_zbits(k) rounded up to 2, 4, 8 or 16.
unsigned default_zbits(unsigned k);

// Saturating age counter: slices elapsed since its rank was last observed.
// The all-ones value doubles as "never seen".
class DistanceRecorder {
public:
  explicit DistanceRecorder(unsigned zbits);

  void init() noexcept { value_ = sentinel(); }
  void set() noexcept { value_ = 0; }
  void slide() noexcept {
    if (value_ < sentinel()) {
      ++value_;
    }
  }
  [[nodiscard]] bool is_active(unsigned k) const noexcept { return value_ < k; }

  [[nodiscard]] unsigned value() const noexcept { return value_; }
  [[nodiscard]] unsigned zbits() const noexcept { return zbits_; }
  [[nodiscard]] unsigned sentinel() const noexcept { return (1u << zbits_) - 1; }

private:
  unsigned zbits_;
  unsigned value_;
};

// Shape shared by every register of a pool. Recorders are packed 64 / zbits per
// 64-bit word and never straddle a word boundary, so a recorder can be zeroed
// with a single atomic AND without touching its neighbours.
struct DrvLayout {
  unsigned ranks = 0; // L = 32 - b
  unsigned zbits = 0;
  Variant variant = Variant::serial;

  static constexpr unsigned kMaxRanks = 31;
  static constexpr unsigned kMaxZbits = 16;

  // Throws ConfigError unless 1 <= ranks <= 31 and 1 <= zbits <= 16.
  static DrvLayout make(unsigned ranks, unsigned zbits, Variant variant);

  [[nodiscard]] unsigned per_word() const noexcept { return 64 / zbits; }
  [[nodiscard]] unsigned words() const noexcept { return (ranks + per_word() - 1) / per_word(); }
  [[nodiscard]] std::uint64_t field_mask() const noexcept { return (std::uint64_t{1} << zbits) - 1; }
  [[nodiscard]] unsigned sentinel() const noexcept { return static_cast<unsigned>(field_mask()); }
  [[nodiscard]] bool has_accumulator() const noexcept { return variant != Variant::drv_direct; }

  // Initial content of each DRV word: every used field at the sentinel.
  [[nodiscard]] std::vector<std::uint64_t> sentinel_words() const;

  friend bool operator==(const DrvLayout&, const DrvLayout&) = default;
};

// Read-only helpers over a packed DRV.
unsigned recorder_value(const DrvLayout& layout, std::span<const std::uint64_t> drv, unsigned rank);
// Largest rank whose recorder is younger than k slices, or 0.
unsigned windowed_lbp1(const DrvLayout& layout, std::span<const std::uint64_t> drv, unsigned k);

// Non-owning handle to one register: its DRV words plus (for serial/bitset) the
// slice accumulator. Pools hand these out over their flat storage.
//
// record() on bitset and drv_direct registers is a single atomic RMW and may be
// called concurrently; everything else needs exclusive access.
class BdrView {
public:
  BdrView(const DrvLayout& layout, std::span<std::uint64_t> drv, std::uint32_t* acc) noexcept
      : layout_(layout), drv_(drv), acc_(acc) {}

  // Throws std::out_of_range unless 1 <= rank <= layout.ranks.
  void record(unsigned rank);

  // Serial/bitset boundary step: slide every recorder, then mark the slice max.
  void end_slice_update();
  // DRV-direct step run before a slice's first record().
  void begin_slice_update();

  [[nodiscard]] unsigned get_lbp1(unsigned k) const { return windowed_lbp1(layout_, drv_, k); }
  [[nodiscard]] unsigned recorder(unsigned rank) const;
  void load_recorder(unsigned rank, unsigned value);
  [[nodiscard]] std::uint32_t accumulator() const noexcept { return acc_ != nullptr ? *acc_ : 0; }

  void reset();

private:
  void slide_all() noexcept;
  void set_recorder_zero(unsigned rank) noexcept;

  DrvLayout layout_;
  std::span<std::uint64_t> drv_;
  std::uint32_t* acc_;
};

// A standalone register that owns its storage.
class Bdr {
public:
  explicit Bdr(const DrvLayout& layout);
  Bdr(unsigned ranks, unsigned zbits, Variant variant) : Bdr(DrvLayout::make(ranks, zbits, variant)) {}

  [[nodiscard]] BdrView view() noexcept { return {layout_, drv_, layout_.has_accumulator() ? &acc_ : nullptr}; }

  void record(unsigned rank) { view().record(rank); }
  void end_slice_update() { view().end_slice_update(); }
  void begin_slice_update() { view().begin_slice_update(); }
  [[nodiscard]] unsigned get_lbp1(unsigned k) const { return windowed_lbp1(layout_, drv_, k); }
  [[nodiscard]] unsigned recorder(unsigned rank) const;
  void load_recorder(unsigned rank, unsigned value) { view().load_recorder(rank, value); }
  [[nodiscard]] std::uint32_t accumulator() const noexcept { return acc_; }
  [[nodiscard]] const DrvLayout& layout() const noexcept { return layout_; }

  friend bool operator==(const Bdr&, const Bdr&) = default;

private:
  DrvLayout layout_;
  std::vector<std::uint64_t> drv_;
  std::uint32_t acc_ = 0;
};

} // namespace vbdr
