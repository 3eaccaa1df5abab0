#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "vbdr/errors.hpp"
#include "vbdr/estimator.hpp"
#include "vbdr/memory.hpp"
#include "vbdr/pool.hpp"
#include "vbdr/snapshot.hpp"

using namespace vbdr;

namespace {

PoolConfig small_config(Variant v, unsigned k = 4) {
  PoolConfig c;
  c.m = 1u << 12;
  c.b = 6;
  c.k = k;
  c.variant = v;
  return c;
}

constexpr Variant kAll[] = {Variant::serial, Variant::bitset, Variant::drv_direct};

// Words and accumulator of one register, for state diffs.
std::vector<std::uint64_t> register_state(const BdrPool& pool, std::size_t i) {
  const std::size_t w = pool.layout().words();
  std::vector<std::uint64_t> out(pool.drv_words().begin() + static_cast<std::ptrdiff_t>(i * w),
                                 pool.drv_words().begin() + static_cast<std::ptrdiff_t>((i + 1) * w));
  if (!pool.accumulators().empty()) {
    out.push_back(pool.accumulators()[i]);
  }
  return out;
}

// One plain HLL over s registers fed `n` distinct values starting at `base`.
std::vector<unsigned> plain_hll(std::uint32_t base, std::uint32_t n, unsigned log_s, std::uint32_t seed) {
  std::vector<unsigned> regs(std::size_t{1} << log_s, 0);
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t h = hash32(base + i, kFullRange, seed);
    const auto idx = h >> (32 - log_s);
    regs[idx] = std::max(regs[idx], lbp1(h << log_s, 32 - log_s));
  }
  return regs;
}

} // namespace

TEST(PoolConfig, Validation) {
  PoolConfig c;
  EXPECT_NO_THROW(c.validate());
  c.b = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = PoolConfig{};
  c.k = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = PoolConfig{};
  c.m = c.g();
  EXPECT_THROW(c.validate(), ConfigError);
  c = PoolConfig{};
  c.k = 15;
  c.zbits = 3;
  EXPECT_THROW(c.validate(), ConfigError);
  c.zbits = 4;
  EXPECT_NO_THROW(c.validate());
  c.k = 70000;
  c.zbits = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW(BdrPool(PoolConfig{.m = 100, .b = 9}), ConfigError);
}

TEST(Pool, FreshIsEmpty) {
  for (Variant v : kAll) {
    BdrPool pool(small_config(v));
    EXPECT_EQ(pool.sum_lbp1(123), 0u);
    EXPECT_EQ(pool.gather_registers(123), std::vector<unsigned>(64, 0));
    EXPECT_EQ(pool.estimate(123), 0.0);
    pool.advance_slice();
    const BdrPool fresh(small_config(v));
    EXPECT_EQ(pool.drv_words().size(), fresh.drv_words().size());
    EXPECT_TRUE(std::equal(pool.drv_words().begin(), pool.drv_words().end(), fresh.drv_words().begin()));
  }
}

TEST(Pool, DuplicateScanIsIdempotent) {
  for (Variant v : kAll) {
    BdrPool once(small_config(v));
    BdrPool twice(small_config(v));
    once.scan_pair(1, 2);
    twice.scan_pair(1, 2);
    twice.scan_pair(1, 2);
    EXPECT_EQ(once, twice);
  }
}

TEST(Pool, SingleTouch) {
  std::mt19937 rng(8);
  for (Variant v : kAll) {
    BdrPool pool(small_config(v));
    for (int t = 0; t < 3; ++t) {
      for (int i = 0; i < 500; ++i) {
        pool.scan_pair(rng() % 20, rng());
      }
      pool.advance_slice();
    }
    pool.open_slice();
    for (int e = 0; e < 50; ++e) {
      const std::uint32_t aip = rng() % 20;
      const std::uint32_t bip = rng();
      std::vector<std::vector<std::uint64_t>> before;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        before.push_back(register_state(pool, i));
      }
      pool.scan_pair(aip, bip);
      std::size_t changed = 0;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (register_state(pool, i) != before[i]) {
          ++changed;
          EXPECT_EQ(i, pool.locate(aip, bip).index);
        }
      }
      EXPECT_LE(changed, 1u);
    }
  }
}

TEST(Pool, CouponCollector) {
  PoolConfig c;
  c.b = 6;
  c.m = 1u << 16;
  c.k = 4;
  for (Variant v : kAll) {
    c.variant = v;
    BdrPool pool(c);
    for (std::uint32_t bip = 0; bip < 10000; ++bip) {
      pool.scan_pair(42, bip * 2654435761u);
    }
    pool.advance_slice();
    const auto regs = pool.gather_registers(42);
    EXPECT_EQ(std::count(regs.begin(), regs.end(), 0u), 0);
  }
}

TEST(Pool, KEmptyAdvancesExpireEverything) {
  std::mt19937 rng(2);
  for (Variant v : kAll) {
    for (unsigned k : {1u, 3u, 7u}) {
      BdrPool pool(small_config(v, k));
      for (int t = 0; t < 5; ++t) {
        for (int i = 0; i < 200; ++i) {
          pool.scan_pair(rng() % 8, rng());
        }
        pool.advance_slice();
      }
      for (unsigned i = 0; i < k; ++i) {
        pool.advance_slice();
      }
      const auto regs = pool.all_registers();
      EXPECT_EQ(std::accumulate(regs.begin(), regs.end(), 0u), 0u) << variant_name(v) << " k=" << k;
    }
  }
}

TEST(Pool, OneEventLivesExactlyKBoundaries) {
  for (Variant v : kAll) {
    const unsigned k = 5;
    BdrPool pool(small_config(v, k));
    pool.advance_slice();
    pool.scan_pair(7, 99);
    const auto target = pool.locate(7, 99);
    for (unsigned t = 0; t < k; ++t) {
      pool.advance_slice();
      EXPECT_EQ(pool.register_lbp1(target.index), target.rank) << variant_name(v) << " t=" << t;
    }
    pool.advance_slice();
    EXPECT_EQ(pool.register_lbp1(target.index), 0u) << variant_name(v);
  }
}

TEST(Pool, AdvanceSlicesMatchesRepeatedAdvance) {
  std::mt19937 rng(17);
  for (Variant v : kAll) {
    for (std::uint64_t gap : {0ull, 1ull, 3ull, 10ull, 40ull}) {
      BdrPool a(small_config(v, 6));
      BdrPool b(small_config(v, 6));
      for (int i = 0; i < 300; ++i) {
        const std::uint32_t aip = rng() % 10;
        const std::uint32_t bip = rng();
        a.scan_pair(aip, bip);
        b.scan_pair(aip, bip);
      }
      for (std::uint64_t i = 0; i < gap; ++i) {
        a.advance_slice();
      }
      b.advance_slices(gap);
      EXPECT_EQ(a.slice_index(), b.slice_index());
      EXPECT_EQ(a.all_registers(), b.all_registers()) << variant_name(v) << " gap " << gap;
      a.scan_pair(1, 1);
      b.scan_pair(1, 1);
      a.advance_slice();
      b.advance_slice();
      EXPECT_EQ(a.all_registers(), b.all_registers());
    }
  }
}

TEST(Pool, SumMatchesDirectWalk) {
  std::mt19937 rng(12);
  for (Variant v : kAll) {
    BdrPool pool(small_config(v));
    for (int t = 0; t < 4; ++t) {
      for (int i = 0; i < 2000; ++i) {
        pool.scan_pair(rng() % 16, rng());
      }
      pool.advance_slice();
      for (std::uint32_t aip = 0; aip < 16; ++aip) {
        std::uint64_t walk = 0;
        for (std::uint32_t i = 0; i < pool.g(); ++i) {
          walk += pool.register_lbp1(phy_idx(aip, i, pool.config().seeds.a0, pool.size()));
        }
        const auto regs = pool.gather_registers(aip);
        EXPECT_EQ(pool.sum_lbp1(aip), walk);
        EXPECT_EQ(std::accumulate(regs.begin(), regs.end(), std::uint64_t{0}), walk);
      }
    }
  }
}

TEST(Pool, OrderInsensitiveWithinSlice) {
  std::mt19937 rng(31);
  for (Variant v : {Variant::bitset, Variant::drv_direct}) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> events(3000);
    for (auto& e : events) {
      e = {static_cast<std::uint32_t>(rng() % 30), static_cast<std::uint32_t>(rng())};
    }
    BdrPool a(small_config(v));
    BdrPool b(small_config(v));
    for (auto [aip, bip] : events) {
      a.scan_pair(aip, bip);
    }
    std::shuffle(events.begin(), events.end(), rng);
    for (auto [aip, bip] : events) {
      b.scan_pair(aip, bip);
    }
    EXPECT_EQ(a, b);
  }
}

TEST(Pool, ScanConcurrentNeedsOpenSlice) {
  BdrPool pool(small_config(Variant::drv_direct));
  EXPECT_THROW(pool.scan_concurrent(1, 2), ContractError);
  pool.open_slice();
  EXPECT_NO_THROW(pool.scan_concurrent(1, 2));
  BdrPool serial(small_config(Variant::serial));
  EXPECT_THROW(serial.scan_concurrent(1, 2), ContractError);
}

TEST(Pool, EstimateNeedsTabulatedSizes) {
  PoolConfig c;
  c.b = 2;
  c.m = 1000;
  BdrPool pool(c);
  EXPECT_FALSE(c.can_estimate());
  EXPECT_THROW((void)pool.estimate(1), ConfigError);
  EXPECT_NO_THROW((void)pool.gather_registers(1));
}

TEST(Estimator, Alpha) {
  EXPECT_DOUBLE_EQ(hll_alpha(16), 0.673);
  EXPECT_DOUBLE_EQ(hll_alpha(32), 0.697);
  EXPECT_DOUBLE_EQ(hll_alpha(64), 0.709);
  EXPECT_DOUBLE_EQ(hll_alpha(512), 0.7213 / (1.0 + 1.079 / 512));
  EXPECT_FALSE(hll_size_supported(8));
  EXPECT_FALSE(hll_size_supported(96));
  EXPECT_TRUE(hll_size_supported(1u << 16));
  const std::vector<unsigned> bad(100, 1);
  EXPECT_THROW((void)raw_hll_estimate(bad), std::invalid_argument);
}

TEST(Estimator, EmptyIsZero) {
  const std::vector<unsigned> zeros(64, 0);
  EXPECT_EQ(raw_hll_estimate(zeros), 0.0);
}

TEST(Estimator, LinearCountingRange) {
  std::vector<unsigned> regs(64, 0);
  regs[0] = 3;
  regs[1] = 1;
  EXPECT_NEAR(raw_hll_estimate(regs), 64.0 * std::log(64.0 / 62.0), 1e-12);
}

TEST(Estimator, HarmonicMeanRange) {
  const std::vector<unsigned> regs(64, 6);
  EXPECT_NEAR(raw_hll_estimate(regs), 0.709 * 64 * 64 / (64 * std::pow(2.0, -6)), 1e-9);
}

TEST(Estimator, MonotoneInRank) {
  double prev = -1.0;
  for (unsigned r = 0; r <= 24; ++r) {
    const std::vector<unsigned> regs(128, r);
    const double e = raw_hll_estimate(regs);
    EXPECT_GT(e, prev) << r;
    prev = e;
  }
}

TEST(Estimator, PlainHllAccuracy) {
  constexpr std::uint32_t n = 10000;
  double sum = 0;
  double sum_double = 0;
  int within = 0;
  for (std::uint32_t trial = 0; trial < 100; ++trial) {
    const double e = raw_hll_estimate(plain_hll(trial * 100000u, n, 6, 0xABCD0000u + trial));
    sum += e;
    within += std::abs(e - n) / n <= 3 * 1.04 / 8.0 ? 1 : 0;
    sum_double += raw_hll_estimate(plain_hll(trial * 100000u, 2 * n, 6, 0xABCD0000u + trial));
  }
  // One sketch must sit inside three standard errors; across trials the tail of
  // a 64-register HLL is a little heavier than normal (about 0.8% beyond 3 sigma).
  const double single = raw_hll_estimate(plain_hll(0, n, 6, 0xABCD0000u));
  EXPECT_LE(std::abs(single - n) / n, 3 * 1.04 / 8.0);
  EXPECT_GE(within, 97);
  EXPECT_LE(std::abs(sum / 100 - n) / n, 0.13);
  const double ratio = sum_double / sum;
  EXPECT_GT(ratio, 1.8);
  EXPECT_LT(ratio, 2.2);
}

TEST(Estimator, SharedRegisterFormula) {
  EXPECT_DOUBLE_EQ(shared_register_estimate(0.0, 512, 0.0, 65536), 0.0);
  EXPECT_DOUBLE_EQ(shared_register_estimate(10.0, 512, 10000.0, 65536), 0.0);
  const double m = 65536;
  const double g = 512;
  EXPECT_DOUBLE_EQ(shared_register_estimate(9000.0, 512, 65536.0, 65536), m * g / (m - g) * (9000.0 / g - 1.0));
  EXPECT_THROW((void)shared_register_estimate(1.0, 512, 1.0, 512), ConfigError);
}

TEST(Memory, SpotValues) {
  EXPECT_EQ(bdr_bits(Variant::drv_direct, 8, 15), 96u);
  EXPECT_EQ(bdr_bits(Variant::bitset, 8, 15), 120u);
  EXPECT_EQ(bdr_bits(Variant::serial, 8, 15), 101u);
  PoolConfig c;
  c.b = 8;
  c.k = 15;
  c.m = 1u << 16;
  const auto r = memory_report(c);
  EXPECT_EQ(r.ranks, 24u);
  EXPECT_EQ(r.min_zbits, 4u);
  EXPECT_EQ(r.gsmall_bits, 96u);
  EXPECT_EQ(r.gfast_bits, 120u);
  EXPECT_EQ(r.serial_bits, 101u);
  EXPECT_EQ(r.register_bits, 96u);
  EXPECT_EQ(r.total_bits, 96u << 16);
  EXPECT_EQ(r.storage_register_bits, 128u);
  EXPECT_NEAR(lfpm_bits(10000), 40 * std::log(10000.0), 1e-9);
}

TEST(Memory, StorageMatchesAllocation) {
  for (Variant v : kAll) {
    for (unsigned k : {1u, 15u, 300u}) {
      PoolConfig c = small_config(v, k);
      const BdrPool pool(c);
      const auto r = memory_report(c);
      const std::uint64_t allocated = pool.drv_words().size() * 64 + pool.accumulators().size() * 32;
      EXPECT_EQ(r.storage_total_bits, allocated);
      EXPECT_GE(r.storage_register_bits, r.register_bits);
    }
  }
}

TEST(Snapshot, RoundTrip) {
  std::mt19937 rng(6);
  for (Variant v : kAll) {
    PoolConfig c = small_config(v, 9);
    c.seeds = {11, 22};
    BdrPool pool(c);
    for (int t = 0; t < 4; ++t) {
      for (int i = 0; i < 500; ++i) {
        pool.scan_pair(rng() % 10, rng());
      }
      if (t < 3) {
        pool.advance_slice();
      }
    }
    std::stringstream buf;
    write_snapshot(buf, pool);
    const BdrPool back = read_snapshot(buf);
    EXPECT_EQ(back, pool);
    EXPECT_EQ(back.config().seeds, c.seeds);
    EXPECT_EQ(back.estimate(3), pool.estimate(3));
  }
}

TEST(Snapshot, RejectsCorruptInput) {
  std::stringstream bad("NOTAPOOL....");
  EXPECT_THROW(read_snapshot(bad), SnapshotError);
  BdrPool pool(small_config(Variant::bitset));
  std::stringstream buf;
  write_snapshot(buf, pool);
  std::string bytes = buf.str();
  std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(read_snapshot(truncated), SnapshotError);
  bytes[8] = 9; // version
  std::stringstream wrong_version(bytes);
  EXPECT_THROW(read_snapshot(wrong_version), SnapshotError);
}
