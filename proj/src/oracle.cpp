#include "vbdr/oracle.hpp"

#include <stdexcept>
#include <string>

#include "vbdr/errors.hpp"

namespace vbdr {

ExactOracle::ExactOracle(std::size_t retain) : retain_(retain) {
  if (retain == 0) {
    throw ConfigError("oracle must retain at least one slice");
  }
}

void ExactOracle::ingest(std::int64_t slice, std::uint32_t aip, std::uint32_t bip) {
  if (slice < latest_) {
    throw StreamOrderError("oracle slice went backwards: " + std::to_string(slice) + " < " + std::to_string(latest_));
  }
  if (ring_.empty() || ring_.back().index != slice) {
    ring_.push_back({slice, {}});
  }
  latest_ = slice;
  const std::int64_t horizon = latest_ - static_cast<std::int64_t>(retain_) + 1;
  while (ring_.front().index < horizon) {
    ring_.pop_front();
  }
  ring_.back().hosts[aip].insert(bip);
}

std::uint64_t ExactOracle::cardinality(std::uint32_t aip, const SliceWindow& window) const {
  if (window.empty() || ring_.empty()) {
    return 0;
  }
  const std::int64_t horizon = latest_ - static_cast<std::int64_t>(retain_) + 1;
  if (window.first < horizon) {
    throw std::out_of_range("window starts at slice " + std::to_string(window.first) +
                            " but only slices >= " + std::to_string(horizon) + " are retained");
  }
  std::unordered_set<std::uint32_t> seen;
  for (const auto& slice : ring_) {
    if (slice.index < window.first || slice.index > window.last) {
      continue;
    }
    if (auto it = slice.hosts.find(aip); it != slice.hosts.end()) {
      seen.insert(it->second.begin(), it->second.end());
    }
  }
  return seen.size();
}

std::uint64_t ExactOracle::entries() const noexcept {
  std::uint64_t n = 0;
  for (const auto& slice : ring_) {
    for (const auto& [aip, bips] : slice.hosts) {
      n += bips.size();
    }
  }
  return n;
}

} // namespace vbdr
