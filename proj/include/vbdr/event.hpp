#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace vbdr {

// One <aip, bip> pair extracted from a packet crossing the edge router.
struct IpPairEvent {
  double ts = 0.0;       // seconds
  std::uint32_t aip = 0; // monitored host
  std::uint32_t bip = 0; // opposite host

  friend bool operator==(const IpPairEvent&, const IpPairEvent&) = default;
};

// Maps timestamps to slice numbers: floor((ts - origin) / slice_len).
// An event exactly on a boundary belongs to the later slice.
class SliceClock {
public:
  explicit SliceClock(double slice_len, double origin = 0.0);

  [[nodiscard]] std::int64_t slice_of(double ts) const noexcept;
  [[nodiscard]] double slice_len() const noexcept { return slice_len_; }
  [[nodiscard]] double origin() const noexcept { return origin_; }
  [[nodiscard]] double slice_start(std::int64_t slice) const noexcept {
    return origin_ + static_cast<double>(slice) * slice_len_;
  }

private:
  double slice_len_;
  double origin_;
};

// Dotted-quad IPv4 or a decimal 32-bit integer. Throws ParseError.
std::uint32_t parse_host(std::string_view text);
std::string format_ipv4(std::uint32_t ip);

// Parses one `ts,aip,bip` line. Blank lines and `#` comments yield nullopt;
// anything else malformed throws ParseError.
std::optional<IpPairEvent> parse_event_line(std::string_view line);

} // namespace vbdr
