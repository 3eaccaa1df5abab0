#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <list>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "vbdr/event.hpp"
#include "vbdr/pool.hpp"

namespace vbdr {

// Inclusive range of slice numbers; empty when last < first.
struct SliceWindow {
  std::int64_t first = 0;
  std::int64_t last = -1;

  [[nodiscard]] bool empty() const noexcept { return last < first; }
  friend bool operator==(const SliceWindow&, const SliceWindow&) = default;
};

struct WindowQuery {
  double estimate = 0.0;
  SliceWindow window;
};

struct HostEstimate {
  std::uint32_t aip = 0;
  double estimate = 0.0;

  friend bool operator==(const HostEstimate&, const HostEstimate&) = default;
};

// Hosts seen in the current window, most recent first. Bounded: when full, the
// least recently seen host is dropped, so the set is approximate under heavy load.
class CandidateSet {
public:
  explicit CandidateSet(std::size_t capacity);

  void touch(std::uint32_t aip, std::int64_t slice);
  // Drops hosts last seen before `slice`.
  void expire_before(std::int64_t slice);
  [[nodiscard]] std::vector<std::uint32_t> hosts() const;
  [[nodiscard]] std::size_t size() const noexcept { return index_.size(); }
  [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }

private:
  struct Entry {
    std::uint32_t aip;
    std::int64_t last_seen;
  };
  std::size_t capacity_;
  std::list<Entry> order_; // front = most recent
  std::unordered_map<std::uint32_t, std::list<Entry>::iterator> index_;
};

struct EngineConfig {
  PoolConfig pool;
  double slice_len = 1.0;
  // Slice 0 starts here. Unset: the first event's timestamp floored to a slice multiple.
  std::optional<double> origin;
  unsigned workers = 1;
  std::size_t candidate_capacity = std::size_t{1} << 20;
};

// Drives a BdrPool from a timestamped event stream: every slice boundary the
// stream crosses, including silent ones, becomes one advance_slice().
class WindowEngine {
public:
  using BoundaryHook = std::function<void(const WindowEngine&)>;

  explicit WindowEngine(const EngineConfig& config);

  // Throws StreamOrderError (and counts it) when ts goes backwards or precedes the origin.
  void ingest(const IpPairEvent& event);
  // Same contract as calling ingest() per event; same-slice runs are scanned by
  // the configured workers when the variant allows it.
  void ingest_batch(std::span<const IpPairEvent> events);

  // Closes every slice before `slice`.
  void advance_to(std::int64_t slice);
  // Closes the open slice.
  void finish();

  // Estimate over the window ending at the last completed slice. A drv_direct
  // pool queried mid-slice already includes the open slice's records.
  [[nodiscard]] WindowQuery query(std::uint32_t aip) const;
  [[nodiscard]] SliceWindow window() const noexcept;
  // Candidates at or above threshold, by descending estimate then ascending aip.
  [[nodiscard]] std::vector<HostEstimate> query_top(double threshold, std::span<const std::uint32_t> candidates) const;
  [[nodiscard]] std::vector<HostEstimate> query_top(double threshold) const;

  // Called after each boundary while candidates are tracked.
  void on_boundary(BoundaryHook hook) { hook_ = std::move(hook); }

  [[nodiscard]] const BdrPool& pool() const noexcept { return pool_; }
  // Number of the open slice.
  [[nodiscard]] std::int64_t current_slice() const noexcept { return static_cast<std::int64_t>(pool_.slice_index()); }
  [[nodiscard]] std::uint64_t rejected() const noexcept { return rejected_; }
  [[nodiscard]] const CandidateSet& candidates() const noexcept { return candidates_; }
  [[nodiscard]] const std::optional<SliceClock>& clock() const noexcept { return clock_; }
  [[nodiscard]] const EngineConfig& config() const noexcept { return config_; }

private:
  std::int64_t admit(const IpPairEvent& event);
  void close_one_slice();
  void scan_run(std::span<const IpPairEvent> run, std::int64_t slice);

  EngineConfig config_;
  BdrPool pool_;
  std::optional<SliceClock> clock_;
  CandidateSet candidates_;
  BoundaryHook hook_;
  double last_ts_ = 0.0;
  std::uint64_t rejected_ = 0;
};

void write_top_csv_header(std::ostream& out);
// Rows of `aip,estimate,window_start,window_end`.
void write_top_csv(std::ostream& out, std::span<const HostEstimate> rows, const SliceWindow& window);

} // namespace vbdr
