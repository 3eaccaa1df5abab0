#include "vbdr/lfpm.hpp"

#include <string>

#include "vbdr/errors.hpp"
#include "vbdr/estimator.hpp"

namespace vbdr {

void LfpmList::insert(std::int64_t slice, unsigned rank) {
  const auto stamp = static_cast<std::uint32_t>(slice);
  if (!cells_.empty() && stamp < cells_.back().slice) {
    throw StreamOrderError("LFPM insert at slice " + std::to_string(slice) + " after slice " +
                           std::to_string(cells_.back().slice));
  }
  if (!cells_.empty() && cells_.back().slice == stamp && cells_.back().rank >= rank) {
    return;
  }
  while (!cells_.empty() && cells_.back().rank <= rank) {
    cells_.pop_back();
  }
  cells_.push_back({stamp, static_cast<std::uint8_t>(rank)});
}

unsigned LfpmList::query(std::int64_t now, unsigned k) {
  while (!cells_.empty() && static_cast<std::int64_t>(cells_.front().slice) <= now - static_cast<std::int64_t>(k)) {
    cells_.pop_front();
  }
  return cells_.empty() ? 0 : cells_.front().rank;
}

LfpmPool::LfpmPool(const PoolConfig& config) : config_(config) {
  config_.validate();
  lists_.resize(config_.m);
}

void LfpmPool::scan_pair(std::int64_t slice, std::uint32_t aip, std::uint32_t bip) {
  const auto target = locate_pair(aip, bip, config_.b, config_.m, config_.seeds);
  lists_[target.index].insert(slice, target.rank);
}

std::vector<unsigned> LfpmPool::gather_registers(std::uint32_t aip, std::int64_t now) {
  std::vector<unsigned> out(config_.g());
  for (std::uint32_t i = 0; i < config_.g(); ++i) {
    out[i] = lists_[phy_idx(aip, i, config_.seeds.a0, config_.m)].query(now, config_.k);
  }
  return out;
}

std::vector<unsigned> LfpmPool::all_registers(std::int64_t now) {
  std::vector<unsigned> out(config_.m);
  for (std::uint32_t i = 0; i < config_.m; ++i) {
    out[i] = lists_[i].query(now, config_.k);
  }
  return out;
}

double LfpmPool::pool_estimate(std::int64_t now) { return raw_hll_estimate(all_registers(now)); }

double LfpmPool::estimate(std::uint32_t aip, std::int64_t now) { return estimate(aip, now, pool_estimate(now)); }

double LfpmPool::estimate(std::uint32_t aip, std::int64_t now, double pool_estimate) {
  const double host = raw_hll_estimate(gather_registers(aip, now));
  return shared_register_estimate(host, config_.g(), pool_estimate, config_.m);
}

double LfpmPool::mean_cells(std::int64_t now) {
  std::uint64_t cells = 0;
  for (auto& list : lists_) {
    list.query(now, config_.k);
    cells += list.size();
  }
  return static_cast<double>(cells) / static_cast<double>(lists_.size());
}

} // namespace vbdr
