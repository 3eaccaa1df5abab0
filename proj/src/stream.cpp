#include "vbdr/stream.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "vbdr/errors.hpp"
#include "vbdr/parallel.hpp"

namespace vbdr {

CandidateSet::CandidateSet(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) {
    throw ConfigError("candidate capacity must be >= 1");
  }
}

void CandidateSet::touch(std::uint32_t aip, std::int64_t slice) {
  if (auto it = index_.find(aip); it != index_.end()) {
    it->second->last_seen = slice;
    order_.splice(order_.begin(), order_, it->second);
    return;
  }
  order_.push_front({aip, slice});
  index_.emplace(aip, order_.begin());
  if (index_.size() > capacity_) {
    index_.erase(order_.back().aip);
    order_.pop_back();
  }
}

void CandidateSet::expire_before(std::int64_t slice) {
  while (!order_.empty() && order_.back().last_seen < slice) {
    index_.erase(order_.back().aip);
    order_.pop_back();
  }
}

std::vector<std::uint32_t> CandidateSet::hosts() const {
  std::vector<std::uint32_t> out;
  out.reserve(index_.size());
  for (const auto& e : order_) {
    out.push_back(e.aip);
  }
  std::sort(out.begin(), out.end());
  return out;
}

WindowEngine::WindowEngine(const EngineConfig& config)
    : config_(config), pool_(config.pool), candidates_(config.candidate_capacity) {
  if (config.workers == 0) {
    throw ConfigError("worker count must be >= 1");
  }
  // Validates slice_len up front rather than on the first event.
  SliceClock probe(config.slice_len, config.origin.value_or(0.0));
  if (config.origin) {
    clock_ = probe;
  }
}

std::int64_t WindowEngine::admit(const IpPairEvent& event) {
  if (!clock_) {
    const double origin = std::floor(event.ts / config_.slice_len) * config_.slice_len;
    clock_.emplace(config_.slice_len, origin);
    last_ts_ = event.ts;
  }
  const auto slice = clock_->slice_of(event.ts);
  if (event.ts < last_ts_ || slice < current_slice()) {
    ++rejected_;
    throw StreamOrderError("event at ts=" + std::to_string(event.ts) + " arrived after ts=" + std::to_string(last_ts_));
  }
  if (slice < 0) {
    ++rejected_;
    throw StreamOrderError("event at ts=" + std::to_string(event.ts) + " precedes the stream origin");
  }
  last_ts_ = event.ts;
  return slice;
}

void WindowEngine::ingest(const IpPairEvent& event) {
  const auto slice = admit(event);
  advance_to(slice);
  pool_.scan_pair(event.aip, event.bip);
  candidates_.touch(event.aip, slice);
}

void WindowEngine::ingest_batch(std::span<const IpPairEvent> events) {
  std::size_t run_start = 0;
  std::int64_t run_slice = current_slice();
  for (std::size_t i = 0; i < events.size(); ++i) {
    std::int64_t slice = 0;
    try {
      slice = admit(events[i]);
    } catch (const StreamOrderError&) {
      scan_run(events.subspan(run_start, i - run_start), run_slice);
      throw;
    }
    if (slice != run_slice) {
      scan_run(events.subspan(run_start, i - run_start), run_slice);
      run_start = i;
      run_slice = slice;
    }
  }
  scan_run(events.subspan(run_start), run_slice);
}

void WindowEngine::scan_run(std::span<const IpPairEvent> run, std::int64_t slice) {
  if (run.empty()) {
    return;
  }
  advance_to(slice);
  if (config_.workers > 1 && pool_.config().variant != Variant::serial) {
    scan_batch(pool_, ScanBatch{run, config_.workers});
  } else {
    for (const auto& e : run) {
      pool_.scan_pair(e.aip, e.bip);
    }
  }
  for (const auto& e : run) {
    candidates_.touch(e.aip, slice);
  }
}

void WindowEngine::close_one_slice() {
  if (config_.workers > 1) {
    boundary_parallel(pool_, config_.workers);
  } else {
    pool_.advance_slice();
  }
  candidates_.expire_before(window().first);
}

void WindowEngine::advance_to(std::int64_t slice) {
  while (current_slice() < slice) {
    if (hook_ && candidates_.size() > 0) {
      close_one_slice();
      hook_(*this);
      continue;
    }
    // Nothing is tracked, so intermediate boundaries have nothing to report.
    pool_.advance_slices(static_cast<std::uint64_t>(slice - current_slice()));
    candidates_.expire_before(window().first);
  }
}

void WindowEngine::finish() { advance_to(current_slice() + 1); }

SliceWindow WindowEngine::window() const noexcept {
  const std::int64_t last = current_slice() - 1;
  if (last < 0) {
    return {};
  }
  return {std::max<std::int64_t>(0, last - static_cast<std::int64_t>(pool_.config().k) + 1), last};
}

WindowQuery WindowEngine::query(std::uint32_t aip) const {
  const auto w = window();
  if (w.empty()) {
    return {0.0, w};
  }
  return {pool_.estimate(aip), w};
}

std::vector<HostEstimate> WindowEngine::query_top(double threshold, std::span<const std::uint32_t> candidates) const {
  std::vector<HostEstimate> out;
  if (window().empty() || candidates.empty()) {
    return out;
  }
  std::vector<std::uint32_t> hosts(candidates.begin(), candidates.end());
  std::sort(hosts.begin(), hosts.end());
  hosts.erase(std::unique(hosts.begin(), hosts.end()), hosts.end());
  const auto estimates = estimate_parallel(pool_, hosts, config_.workers);
  for (std::size_t i = 0; i < hosts.size(); ++i) {
    if (estimates[i] >= threshold) {
      out.push_back({hosts[i], estimates[i]});
    }
  }
  std::sort(out.begin(), out.end(), [](const HostEstimate& a, const HostEstimate& b) {
    return a.estimate != b.estimate ? a.estimate > b.estimate : a.aip < b.aip;
  });
  return out;
}

std::vector<HostEstimate> WindowEngine::query_top(double threshold) const {
  return query_top(threshold, candidates_.hosts());
}

void write_top_csv_header(std::ostream& out) { out << "aip,estimate,window_start,window_end\n"; }

void write_top_csv(std::ostream& out, std::span<const HostEstimate> rows, const SliceWindow& window) {
  for (const auto& row : rows) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", row.estimate);
    out << format_ipv4(row.aip) << ',' << buf << ',' << window.first << ',' << window.last << '\n';
  }
}

} // namespace vbdr
