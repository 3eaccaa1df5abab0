#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "vbdr/event.hpp"
#include "vbdr/stream.hpp"

namespace vbdr {

// A monitored host that contacts exactly n distinct bips in every slice of
// [first_slice, last_slice]. Between consecutive active slices round(churn * n)
// of them are replaced with never-seen bips, so a window covering a active
// slices holds n + (a - 1) * round(churn * n) distinct bips.
struct HostSpec {
  std::uint32_t aip = 0;
  std::uint32_t n = 0;
  double churn = 0.0;
  std::int64_t first_slice = 0;
  std::int64_t last_slice = -1; // -1: through the last generated slice

  friend bool operator==(const HostSpec&, const HostSpec&) = default;
};

struct GenConfig {
  std::uint64_t seed = 1;
  std::int64_t slices = 10;
  double slice_len = 1.0;
  double origin = 0.0;
  unsigned k = 300; // window used for the ground-truth rows
  std::vector<HostSpec> hosts;
  // Extra random-aip hosts active in every slice; not listed in the truth rows.
  std::uint32_t background_hosts = 0;
  std::uint32_t background_n = 0;
  double background_churn = 1.0;
};

struct TruthRow {
  std::uint32_t aip = 0;
  SliceWindow window;
  std::uint64_t cardinality = 0;

  friend bool operator==(const TruthRow&, const TruthRow&) = default;
};

struct GeneratedStream {
  std::vector<IpPairEvent> events;
  std::vector<TruthRow> truth; // one row per explicit host per boundary
};

// Closed-form distinct count of host's bips over window.
std::uint64_t window_cardinality(const HostSpec& host, const SliceWindow& window, std::int64_t slices);

// Deterministic for a given config. Every fresh bip in the stream is distinct.
// Throws ConfigError for infeasible configs (more than 2^32 fresh bips, bad churn, ...).
GeneratedStream generate(const GenConfig& config);

// key=value lines; `host=aip,n[,churn[,first[,last]]]` may repeat. Throws ParseError.
GenConfig parse_gen_config(std::istream& in);

void write_events(std::ostream& out, std::span<const IpPairEvent> events);
void write_truth_csv(std::ostream& out, std::span<const TruthRow> rows);

} // namespace vbdr
