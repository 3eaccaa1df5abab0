#include "vbdr/generator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <istream>
#include <ostream>
#include <random>
#include <string>
#include <type_traits>
#include <unordered_set>

#include "vbdr/errors.hpp"
#include "vbdr/hashing.hpp"

namespace vbdr {

namespace {

std::int64_t last_active(const HostSpec& host, std::int64_t slices) {
  return host.last_slice < 0 ? slices - 1 : std::min(host.last_slice, slices - 1);
}

std::uint32_t replaced_per_slice(const HostSpec& host) {
  return static_cast<std::uint32_t>(std::llround(host.churn * static_cast<double>(host.n)));
}

void check_host(const HostSpec& host) {
  if (!(host.churn >= 0.0 && host.churn <= 1.0)) {
    throw ConfigError("churn must be in [0, 1]");
  }
  if (host.first_slice < 0) {
    throw ConfigError("host activity cannot start before slice 0");
  }
}

std::uint64_t fresh_bips(const HostSpec& host, std::int64_t slices) {
  const std::int64_t active = last_active(host, slices) - host.first_slice + 1;
  if (active <= 0) {
    return 0;
  }
  return host.n + static_cast<std::uint64_t>(active - 1) * replaced_per_slice(host);
}

// Per-host rolling contact list.
struct HostState {
  HostSpec spec;
  std::deque<std::uint32_t> contacts;
};

} // namespace

std::uint64_t window_cardinality(const HostSpec& host, const SliceWindow& window, std::int64_t slices) {
  const std::int64_t first = std::max(host.first_slice, window.first);
  const std::int64_t last = std::min(last_active(host, slices), window.last);
  if (last < first || host.n == 0) {
    return 0;
  }
  return host.n + static_cast<std::uint64_t>(last - first) * replaced_per_slice(host);
}

GeneratedStream generate(const GenConfig& config) {
  if (config.slices < 0) {
    throw ConfigError("slice count must be >= 0");
  }
  if (config.k == 0) {
    throw ConfigError("truth window k must be >= 1");
  }
  const SliceClock clock(config.slice_len, config.origin);

  std::vector<HostState> hosts;
  std::unordered_set<std::uint32_t> taken;
  for (const auto& spec : config.hosts) {
    check_host(spec);
    if (!taken.insert(spec.aip).second) {
      throw ConfigError("duplicate host " + format_ipv4(spec.aip));
    }
    hosts.push_back({spec, {}});
  }
  const std::size_t explicit_hosts = hosts.size();

  std::mt19937_64 rng(config.seed);
  const HostSpec background{0, config.background_n, config.background_churn, 0, -1};
  check_host(background);
  for (std::uint32_t i = 0; i < config.background_hosts; ++i) {
    std::uint32_t aip = 0;
    do {
      aip = static_cast<std::uint32_t>(rng());
    } while (!taken.insert(aip).second);
    HostSpec spec = background;
    spec.aip = aip;
    hosts.push_back({spec, {}});
  }

  std::uint64_t total_fresh = 0;
  for (const auto& h : hosts) {
    total_fresh += fresh_bips(h.spec, config.slices);
  }
  if (total_fresh > kFullRange) {
    throw ConfigError("config needs more than 2^32 distinct opposite hosts");
  }

  // fmix32 is a bijection, so distinct counters give distinct bips.
  const auto key = static_cast<std::uint32_t>(config.seed ^ (config.seed >> 32));
  std::uint64_t counter = 0;
  auto fresh = [&] { return hash32(static_cast<std::uint32_t>(counter++), kFullRange, key); };

  GeneratedStream out;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::uniform_real_distribution<double> unit(0.0, 0.999);
  for (std::int64_t s = 0; s < config.slices; ++s) {
    pairs.clear();
    for (auto& h : hosts) {
      if (s < h.spec.first_slice || s > last_active(h.spec, config.slices)) {
        continue;
      }
      if (h.contacts.empty()) {
        for (std::uint32_t i = 0; i < h.spec.n; ++i) {
          h.contacts.push_back(fresh());
        }
      } else {
        for (std::uint32_t i = 0; i < replaced_per_slice(h.spec); ++i) {
          h.contacts.pop_front();
          h.contacts.push_back(fresh());
        }
      }
      for (std::uint32_t bip : h.contacts) {
        pairs.emplace_back(h.spec.aip, bip);
      }
    }
    std::shuffle(pairs.begin(), pairs.end(), rng);
    std::vector<double> offsets(pairs.size());
    for (auto& u : offsets) {
      u = unit(rng);
    }
    std::sort(offsets.begin(), offsets.end());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const double ts = clock.slice_start(s) + offsets[i] * config.slice_len;
      out.events.push_back({ts, pairs[i].first, pairs[i].second});
    }

    const SliceWindow window{std::max<std::int64_t>(0, s - static_cast<std::int64_t>(config.k) + 1), s};
    for (std::size_t i = 0; i < explicit_hosts; ++i) {
      const auto& spec = hosts[i].spec;
      out.truth.push_back({spec.aip, window, window_cardinality(spec, window, config.slices)});
    }
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

template <typename T>
T parse_number(std::string_view text, std::string_view key) {
  const auto s = trim(text);
  T value{};
  if constexpr (std::is_floating_point_v<T>) {
    const std::string copy(s);
    char* end = nullptr;
    value = static_cast<T>(std::strtod(copy.c_str(), &end));
    if (copy.empty() || end != copy.c_str() + copy.size()) {
      throw ParseError("bad number for " + std::string(key) + ": '" + std::string(text) + "'");
    }
  } else {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      throw ParseError("bad integer for " + std::string(key) + ": '" + std::string(text) + "'");
    }
  }
  return value;
}

HostSpec parse_host_spec(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    parts.push_back(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  if (parts.size() < 2 || parts.size() > 5) {
    throw ParseError("host expects aip,n[,churn[,first[,last]]]: '" + std::string(text) + "'");
  }
  HostSpec spec;
  spec.aip = parse_host(parts[0]);
  spec.n = parse_number<std::uint32_t>(parts[1], "host n");
  if (parts.size() > 2) {
    spec.churn = parse_number<double>(parts[2], "host churn");
  }
  if (parts.size() > 3) {
    spec.first_slice = parse_number<std::int64_t>(parts[3], "host first slice");
  }
  if (parts.size() > 4) {
    spec.last_slice = parse_number<std::int64_t>(parts[4], "host last slice");
  }
  return spec;
}

} // namespace

GenConfig parse_gen_config(std::istream& in) {
  GenConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto s = trim(line);
    if (const auto hash = s.find('#'); hash != std::string_view::npos) {
      s = trim(s.substr(0, hash));
    }
    if (s.empty()) {
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("line " + std::to_string(lineno) + ": expected key=value");
    }
    const auto key = trim(s.substr(0, eq));
    const auto value = trim(s.substr(eq + 1));
    if (key == "seed") {
      config.seed = parse_number<std::uint64_t>(value, key);
    } else if (key == "slices") {
      config.slices = parse_number<std::int64_t>(value, key);
    } else if (key == "slice_len" || key == "slice-len") {
      config.slice_len = parse_number<double>(value, key);
    } else if (key == "origin") {
      config.origin = parse_number<double>(value, key);
    } else if (key == "k") {
      config.k = parse_number<unsigned>(value, key);
    } else if (key == "host") {
      config.hosts.push_back(parse_host_spec(value));
    } else if (key == "background_hosts") {
      config.background_hosts = parse_number<std::uint32_t>(value, key);
    } else if (key == "background_n") {
      config.background_n = parse_number<std::uint32_t>(value, key);
    } else if (key == "background_churn") {
      config.background_churn = parse_number<double>(value, key);
    } else {
      throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + std::string(key) + "'");
    }
  }
  return config;
}

void write_events(std::ostream& out, std::span<const IpPairEvent> events) {
  char ts[40];
  for (const auto& e : events) {
    std::snprintf(ts, sizeof(ts), "%.6f", e.ts);
    out << ts << ',' << format_ipv4(e.aip) << ',' << format_ipv4(e.bip) << '\n';
  }
}

void write_truth_csv(std::ostream& out, std::span<const TruthRow> rows) {
  out << "aip,window_start,window_end,true_cardinality\n";
  for (const auto& r : rows) {
    out << format_ipv4(r.aip) << ',' << r.window.first << ',' << r.window.last << ',' << r.cardinality << '\n';
  }
}

} // namespace vbdr
