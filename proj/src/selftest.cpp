#include "vbdr/selftest.hpp"

#include <algorithm>
#include <array>
#include <ostream>
#include <random>

#include "vbdr/lfpm.hpp"
#include "vbdr/parallel.hpp"
#include "vbdr/pool.hpp"

namespace vbdr {

bool SelftestReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const SelftestCheck& c) { return c.passed; });
}

namespace {

constexpr std::array<Variant, 3> kVariants{Variant::serial, Variant::bitset, Variant::drv_direct};

struct RandomStream {
  PoolConfig config;
  std::vector<std::vector<IpPairEvent>> slices;
};

RandomStream random_stream(std::mt19937_64& rng) {
  RandomStream s;
  const std::array<unsigned, 4> ks{1, 2, 3, 8};
  s.config.k = ks[rng() % ks.size()];
  s.config.b = 2 + static_cast<unsigned>(rng() % 3);
  s.config.m = s.config.g() * 4;
  s.config.seeds = {static_cast<std::uint32_t>(rng()), static_cast<std::uint32_t>(rng())};
  const std::size_t n_slices = 3 * s.config.k + 4;
  s.slices.resize(n_slices);
  for (auto& slice : s.slices) {
    // A third of the slices stay silent.
    const std::size_t events = rng() % 3 == 0 ? 0 : rng() % 48;
    for (std::size_t i = 0; i < events; ++i) {
      slice.push_back({0.0, static_cast<std::uint32_t>(rng() % 6), static_cast<std::uint32_t>(rng())});
    }
  }
  return s;
}

void skip_runner(std::size_t, const RangeTask&) {}

RangeRunner boundary_runner(const SelftestOptions& options) {
  return options.inject_skip_slide ? RangeRunner(skip_runner) : RangeRunner(run_serial);
}

SelftestCheck check_sliding(const SelftestOptions& options, std::mt19937_64& rng) {
  SelftestCheck check{"sliding window max vs brute-force replay", true, ""};
  for (unsigned s = 0; s < options.streams && check.passed; ++s) {
    const auto stream = random_stream(rng);
    for (Variant v : kVariants) {
      PoolConfig config = stream.config;
      config.variant = v;
      BdrPool pool(config);
      struct Logged {
        std::int64_t slice;
        ScanTarget target;
      };
      std::vector<Logged> log;
      for (std::size_t t = 0; t < stream.slices.size(); ++t) {
        for (const auto& e : stream.slices[t]) {
          pool.scan_pair(e.aip, e.bip);
          log.push_back({static_cast<std::int64_t>(t), pool.locate(e.aip, e.bip)});
        }
        pool.advance_slice(boundary_runner(options));
        std::vector<unsigned> expected(config.m, 0);
        const auto oldest = static_cast<std::int64_t>(t) - static_cast<std::int64_t>(config.k) + 1;
        for (const auto& entry : log) {
          if (entry.slice >= oldest) {
            expected[entry.target.index] = std::max(expected[entry.target.index], entry.target.rank);
          }
        }
        for (std::uint32_t i = 0; i < config.m; ++i) {
          if (pool.register_lbp1(i) != expected[i]) {
            check.passed = false;
            check.detail = std::string(variant_name(v)) + " stream " + std::to_string(s) + " slice " +
                           std::to_string(t) + " register " + std::to_string(i) + ": got " +
                           std::to_string(pool.register_lbp1(i)) + ", expected " + std::to_string(expected[i]);
            return check;
          }
        }
      }
    }
  }
  return check;
}

SelftestCheck check_lfpm(const SelftestOptions& options, std::mt19937_64& rng) {
  SelftestCheck check{"LFPM list agrees with BDR readout", true, ""};
  for (unsigned s = 0; s < options.streams; ++s) {
    const unsigned k = 1 + static_cast<unsigned>(rng() % 10);
    const unsigned ranks = 20;
    for (Variant v : kVariants) {
      Bdr bdr(ranks, min_zbits(k), v);
      LfpmList list;
      for (std::int64_t t = 0; t < 40; ++t) {
        if (v == Variant::drv_direct && !options.inject_skip_slide && t > 0) {
          bdr.begin_slice_update();
        }
        const unsigned n = static_cast<unsigned>(rng() % 4);
        for (unsigned i = 0; i < n; ++i) {
          const unsigned r = 1 + static_cast<unsigned>(rng() % ranks);
          bdr.record(r);
          list.insert(t, r);
        }
        if (v != Variant::drv_direct && !options.inject_skip_slide) {
          bdr.end_slice_update();
        }
        const unsigned want = list.query(t, k);
        if (bdr.get_lbp1(k) != want) {
          check.passed = false;
          check.detail = std::string(variant_name(v)) + " k=" + std::to_string(k) + " slice " + std::to_string(t) +
                         ": BDR " + std::to_string(bdr.get_lbp1(k)) + " vs LFPM " + std::to_string(want);
          return check;
        }
      }
    }
  }
  return check;
}

SelftestCheck check_variants(const SelftestOptions& options, std::mt19937_64& rng) {
  SelftestCheck check{"serial, gfast and gsmall agree on every host", true, ""};
  for (unsigned s = 0; s < options.streams; ++s) {
    const auto stream = random_stream(rng);
    std::vector<BdrPool> pools;
    for (Variant v : kVariants) {
      PoolConfig config = stream.config;
      config.variant = v;
      pools.emplace_back(config);
    }
    for (std::size_t t = 0; t < stream.slices.size(); ++t) {
      for (auto& pool : pools) {
        for (const auto& e : stream.slices[t]) {
          pool.scan_pair(e.aip, e.bip);
        }
        pool.advance_slice(boundary_runner(options));
      }
      for (std::uint32_t aip = 0; aip < 6; ++aip) {
        const auto ref = pools[0].gather_registers(aip);
        if (pools[1].gather_registers(aip) != ref || pools[2].gather_registers(aip) != ref) {
          check.passed = false;
          check.detail = "stream " + std::to_string(s) + " slice " + std::to_string(t) + " host " + std::to_string(aip);
          return check;
        }
      }
    }
  }
  return check;
}

SelftestCheck check_parallel(const SelftestOptions& options, std::mt19937_64& rng) {
  SelftestCheck check{"parallel scan is bit-identical to serial scan (" + std::to_string(options.workers) + " workers)",
                      true, ""};
  for (Variant v : {Variant::bitset, Variant::drv_direct}) {
    for (unsigned s = 0; s < std::max(1u, options.streams / 4); ++s) {
      PoolConfig config;
      config.m = 1u << 12;
      config.b = 6;
      config.k = 4;
      config.variant = v;
      BdrPool serial(config);
      BdrPool parallel(config);
      for (int t = 0; t < 3; ++t) {
        std::vector<IpPairEvent> events(20000);
        for (auto& e : events) {
          e = {0.0, static_cast<std::uint32_t>(rng() % 32), static_cast<std::uint32_t>(rng())};
        }
        for (const auto& e : events) {
          serial.scan_pair(e.aip, e.bip);
        }
        scan_batch(parallel, ScanBatch{events, options.workers});
        serial.advance_slice(boundary_runner(options));
        parallel.advance_slice(options.inject_skip_slide ? RangeRunner(skip_runner) : thread_runner(options.workers));
        if (!(serial == parallel)) {
          check.passed = false;
          check.detail = std::string(variant_name(v)) + " diverged at slice " + std::to_string(t);
          return check;
        }
      }
    }
  }
  return check;
}

} // namespace

SelftestReport run_selftest(const SelftestOptions& options) {
  std::mt19937_64 rng(options.seed);
  SelftestReport report;
  report.checks.push_back(check_sliding(options, rng));
  report.checks.push_back(check_lfpm(options, rng));
  report.checks.push_back(check_variants(options, rng));
  report.checks.push_back(check_parallel(options, rng));
  return report;
}

void print_selftest(std::ostream& out, const SelftestReport& report) {
  for (const auto& c : report.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) {
      out << " -- " << c.detail;
    }
    out << '\n';
  }
  out << (report.passed() ? "selftest passed" : "selftest FAILED") << '\n';
}

} // namespace vbdr
