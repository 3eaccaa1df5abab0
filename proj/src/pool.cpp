#include "vbdr/pool.hpp"

#include <algorithm>
#include <string>

#include "vbdr/errors.hpp"
#include "vbdr/estimator.hpp"

namespace vbdr {

void PoolConfig::validate() const {
  if (b < 1 || b > 31) {
    throw ConfigError("b must be in [1, 31], got " + std::to_string(b));
  }
  if (k == 0) {
    throw ConfigError("window length k must be >= 1");
  }
  if (std::uint64_t{g()} * 2 > m) {
    throw ConfigError("pool size m=" + std::to_string(m) + " must be at least 2g=" + std::to_string(std::uint64_t{g()} * 2));
  }
  const unsigned z = recorder_bits();
  if (z < min_zbits(k)) {
    throw ConfigError("zbits=" + std::to_string(z) + " cannot represent window k=" + std::to_string(k) +
                      " (need >= " + std::to_string(min_zbits(k)) + ")");
  }
  if (z > DrvLayout::kMaxZbits) {
    throw ConfigError("zbits must be <= 16, got " + std::to_string(z));
  }
}

bool PoolConfig::can_estimate() const noexcept { return hll_size_supported(g()) && hll_size_supported(m); }

void run_serial(std::size_t count, const RangeTask& task) {
  if (count > 0) {
    task(0, count);
  }
}

BdrPool::BdrPool(const PoolConfig& config)
    : config_(config), begin_pending_(config.variant == Variant::drv_direct) {
  config_.validate();
  config_.zbits = config_.recorder_bits();
  layout_ = DrvLayout::make(config_.ranks(), config_.zbits, config_.variant);
  const auto fresh = layout_.sentinel_words();
  drv_.reserve(std::size_t{config_.m} * fresh.size());
  for (std::uint32_t i = 0; i < config_.m; ++i) {
    drv_.insert(drv_.end(), fresh.begin(), fresh.end());
  }
  if (layout_.has_accumulator()) {
    acc_.assign(config_.m, 0);
  }
}

ScanTarget BdrPool::locate(std::uint32_t aip, std::uint32_t bip) const noexcept {
  return locate_pair(aip, bip, config_.b, config_.m, config_.seeds);
}

void BdrPool::scan_pair(std::uint32_t aip, std::uint32_t bip) {
  open_slice();
  record(locate(aip, bip));
}

void BdrPool::scan_concurrent(std::uint32_t aip, std::uint32_t bip) {
  if (config_.variant == Variant::serial) {
    throw ContractError("serial pools accept a single writer; use scan_pair");
  }
  if (begin_pending_) {
    throw ContractError("scan_concurrent before open_slice");
  }
  record(locate(aip, bip));
}

void BdrPool::record(const ScanTarget& target) { reg(target.index).record(target.rank); }

void BdrPool::open_slice(const RangeRunner& run) {
  if (!begin_pending_) {
    return;
  }
  run(config_.m, [this](std::size_t first, std::size_t last) {
    for (std::size_t i = first; i < last; ++i) {
      reg(i).begin_slice_update();
    }
  });
  begin_pending_ = false;
}

void BdrPool::advance_slice(const RangeRunner& run) {
  if (config_.variant == Variant::drv_direct) {
    // An empty slice still has to age the recorders.
    open_slice(run);
    begin_pending_ = true;
  } else {
    run(config_.m, [this](std::size_t first, std::size_t last) {
      for (std::size_t i = first; i < last; ++i) {
        reg(i).end_slice_update();
      }
    });
  }
  ++slice_index_;
}

void BdrPool::advance_slices(std::uint64_t count) {
  // After sentinel + 1 boundaries every recorder is saturated and every
  // accumulator is clear, so further boundaries only move the index.
  const std::uint64_t touched = std::min<std::uint64_t>(count, std::uint64_t{layout_.sentinel()} + 1);
  for (std::uint64_t i = 0; i < touched; ++i) {
    advance_slice();
  }
  slice_index_ += count - touched;
}

unsigned BdrPool::register_lbp1(std::size_t index) const { return windowed_lbp1(layout_, drv_of(index), config_.k); }

std::uint64_t BdrPool::sum_lbp1(std::uint32_t aip) const {
  std::uint64_t sum = 0;
  for (std::uint32_t i = 0; i < config_.g(); ++i) {
    sum += register_lbp1(phy_idx(aip, i, config_.seeds.a0, config_.m));
  }
  return sum;
}

std::vector<unsigned> BdrPool::gather_registers(std::uint32_t aip) const {
  std::vector<unsigned> out(config_.g());
  for (std::uint32_t i = 0; i < config_.g(); ++i) {
    out[i] = register_lbp1(phy_idx(aip, i, config_.seeds.a0, config_.m));
  }
  return out;
}

std::vector<unsigned> BdrPool::all_registers() const {
  std::vector<unsigned> out(config_.m);
  for (std::uint32_t i = 0; i < config_.m; ++i) {
    out[i] = register_lbp1(i);
  }
  return out;
}

void BdrPool::check_estimable() const {
  if (!config_.can_estimate()) {
    throw ConfigError("estimation needs g and m in {16, 32, 64} or powers of two >= 128 (g=" +
                      std::to_string(config_.g()) + ", m=" + std::to_string(config_.m) + ")");
  }
}

double BdrPool::pool_estimate() const {
  check_estimable();
  return raw_hll_estimate(all_registers());
}

double BdrPool::estimate(std::uint32_t aip) const { return estimate(aip, pool_estimate()); }

double BdrPool::estimate(std::uint32_t aip, double pool_estimate) const {
  check_estimable();
  const double host = raw_hll_estimate(gather_registers(aip));
  return shared_register_estimate(host, config_.g(), pool_estimate, config_.m);
}

BdrView BdrPool::reg(std::size_t index) {
  const std::size_t words = layout_.words();
  return {layout_, std::span<std::uint64_t>(drv_).subspan(index * words, words),
          layout_.has_accumulator() ? &acc_[index] : nullptr};
}

std::span<const std::uint64_t> BdrPool::drv_of(std::size_t index) const noexcept {
  const std::size_t words = layout_.words();
  return std::span<const std::uint64_t>(drv_).subspan(index * words, words);
}

BdrPool BdrPool::restore(const PoolConfig& config, std::uint64_t slice_index, bool begin_pending,
                         std::vector<std::uint64_t> drv, std::vector<std::uint32_t> acc) {
  BdrPool pool(config);
  if (drv.size() != pool.drv_.size() || acc.size() != pool.acc_.size()) {
    throw SnapshotError("register arrays do not match the pool configuration");
  }
  if (begin_pending && config.variant != Variant::drv_direct) {
    throw SnapshotError("pending begin-of-slice flag set on a non drv_direct pool");
  }
  pool.drv_ = std::move(drv);
  pool.acc_ = std::move(acc);
  pool.slice_index_ = slice_index;
  pool.begin_pending_ = begin_pending;
  return pool;
}

} // namespace vbdr
