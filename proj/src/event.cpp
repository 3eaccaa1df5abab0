#include "vbdr/event.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

#include "vbdr/errors.hpp"

namespace vbdr {

SliceClock::SliceClock(double slice_len, double origin) : slice_len_(slice_len), origin_(origin) {
  if (!(slice_len > 0.0) || !std::isfinite(slice_len)) {
    throw ConfigError("slice length must be a positive number of seconds");
  }
}

std::int64_t SliceClock::slice_of(double ts) const noexcept {
  return static_cast<std::int64_t>(std::floor((ts - origin_) / slice_len_));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_whole(std::string_view s, T& out) {
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

} // namespace

std::uint32_t parse_host(std::string_view text) {
  const auto s = trim(text);
  if (s.find('.') == std::string_view::npos) {
    std::uint32_t value = 0;
    if (s.empty() || !parse_whole(s, value)) {
      throw ParseError("bad host id '" + std::string(text) + "'");
    }
    return value;
  }
  std::uint32_t ip = 0;
  std::size_t start = 0;
  for (int octet = 0; octet < 4; ++octet) {
    const auto dot = s.find('.', start);
    const bool last = octet == 3;
    if (last != (dot == std::string_view::npos)) {
      throw ParseError("bad IPv4 address '" + std::string(text) + "'");
    }
    const auto part = s.substr(start, last ? std::string_view::npos : dot - start);
    unsigned value = 0;
    if (part.empty() || part.size() > 3 || !parse_whole(part, value) || value > 255) {
      throw ParseError("bad IPv4 address '" + std::string(text) + "'");
    }
    ip = (ip << 8) | value;
    start = dot + 1;
  }
  return ip;
}

std::string format_ipv4(std::uint32_t ip) {
  return std::to_string(ip >> 24) + '.' + std::to_string((ip >> 16) & 0xFF) + '.' +
         std::to_string((ip >> 8) & 0xFF) + '.' + std::to_string(ip & 0xFF);
}

std::optional<IpPairEvent> parse_event_line(std::string_view line) {
  const auto s = trim(line);
  if (s.empty() || s.front() == '#') {
    return std::nullopt;
  }
  const auto c1 = s.find(',');
  const auto c2 = c1 == std::string_view::npos ? c1 : s.find(',', c1 + 1);
  if (c2 == std::string_view::npos || s.find(',', c2 + 1) != std::string_view::npos) {
    throw ParseError("expected ts,aip,bip: '" + std::string(line) + "'");
  }
  const auto ts_text = std::string(trim(s.substr(0, c1)));
  char* end = nullptr;
  const double ts = std::strtod(ts_text.c_str(), &end);
  if (ts_text.empty() || end != ts_text.c_str() + ts_text.size() || !std::isfinite(ts) || ts < 0.0) {
    throw ParseError("bad timestamp '" + ts_text + "'");
  }
  return IpPairEvent{ts, parse_host(s.substr(c1 + 1, c2 - c1 - 1)), parse_host(s.substr(c2 + 1))};
}

} // namespace vbdr
