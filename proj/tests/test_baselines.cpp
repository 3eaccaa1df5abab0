#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "vbdr/bdr.hpp"
#include "vbdr/errors.hpp"
#include "vbdr/generator.hpp"
#include "vbdr/lfpm.hpp"
#include "vbdr/oracle.hpp"
#include "vbdr/pool.hpp"

using namespace vbdr;

TEST(Oracle, CountsDistinct) {
  ExactOracle oracle(4);
  for (int i = 0; i < 5; ++i) {
    oracle.ingest(0, 1, 42);
  }
  EXPECT_EQ(oracle.cardinality(1, {0, 0}), 1u);
  oracle.ingest(1, 1, 43);
  EXPECT_EQ(oracle.cardinality(1, {1, 1}), 1u);
  EXPECT_EQ(oracle.cardinality(1, {0, 1}), 2u);
  EXPECT_EQ(oracle.cardinality(2, {0, 1}), 0u);
  EXPECT_THROW(oracle.ingest(0, 1, 1), StreamOrderError);
}

TEST(Oracle, OutsideWindowIsZero) {
  ExactOracle oracle(4);
  oracle.ingest(3, 1, 7);
  oracle.ingest(4, 2, 7);
  EXPECT_EQ(oracle.cardinality(1, {4, 4}), 0u);
}

TEST(Oracle, HorizonEnforced) {
  ExactOracle oracle(2);
  for (std::int64_t s = 0; s < 5; ++s) {
    oracle.ingest(s, 1, static_cast<std::uint32_t>(s));
  }
  EXPECT_EQ(oracle.cardinality(1, {3, 4}), 2u);
  EXPECT_THROW((void)oracle.cardinality(1, {2, 4}), std::out_of_range);
}

TEST(Oracle, MatchesNaiveRecount) {
  std::mt19937 rng(19);
  struct Row {
    std::int64_t slice;
    std::uint32_t aip, bip;
  };
  std::vector<Row> rows;
  std::int64_t slice = 0;
  for (int i = 0; i < 1000; ++i) {
    slice += rng() % 10 == 0 ? 1 + rng() % 3 : 0;
    rows.push_back({slice, static_cast<std::uint32_t>(rng() % 5), static_cast<std::uint32_t>(rng() % 60)});
  }
  const unsigned k = 3;
  ExactOracle oracle(k);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    oracle.ingest(rows[i].slice, rows[i].aip, rows[i].bip);
    const SliceWindow w{std::max<std::int64_t>(0, rows[i].slice - k + 1), rows[i].slice};
    for (std::uint32_t aip = 0; aip < 5; ++aip) {
      std::set<std::uint32_t> naive;
      for (std::size_t j = 0; j <= i; ++j) {
        if (rows[j].aip == aip && rows[j].slice >= w.first && rows[j].slice <= w.last) {
          naive.insert(rows[j].bip);
        }
      }
      ASSERT_EQ(oracle.cardinality(aip, w), naive.size());
    }
  }
}

TEST(Lfpm, DominatedCellsRemoved) {
  LfpmList list;
  list.insert(4, 3);
  list.insert(4, 5);
  ASSERT_EQ(list.size(), 1u);
  EXPECT_EQ(list.cells().front(), (LfpmCell{4, 5}));
}

TEST(Lfpm, DecreasingRanksKept) {
  LfpmList list;
  list.insert(4, 5);
  list.insert(5, 3);
  ASSERT_EQ(list.size(), 2u);
  EXPECT_EQ(list.cells()[0].rank, 5u);
  EXPECT_EQ(list.cells()[1].rank, 3u);
  EXPECT_EQ(list.bits(), 80u);
}

TEST(Lfpm, SameSliceSmallerRankIsDominated) {
  LfpmList list;
  list.insert(4, 5);
  list.insert(4, 3);
  ASSERT_EQ(list.size(), 1u);
  EXPECT_THROW(list.insert(3, 9), StreamOrderError);
}

TEST(Lfpm, Query) {
  LfpmList empty;
  EXPECT_EQ(empty.query(10, 3), 0u);
  LfpmList list;
  list.insert(8, 6);
  EXPECT_EQ(list.query(10, 3), 6u);
  list.insert(9, 2);
  EXPECT_EQ(list.query(11, 3), 2u);
  EXPECT_EQ(list.size(), 1u);
  EXPECT_EQ(list.query(12, 3), 0u);
}

TEST(Lfpm, EquivalentToBdr) {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const unsigned k = 1 + rng() % 20;
    for (Variant v : {Variant::serial, Variant::bitset, Variant::drv_direct}) {
      Bdr bdr(23, min_zbits(k), v);
      LfpmList list;
      for (std::int64_t t = 0; t < 80; ++t) {
        if (v == Variant::drv_direct && t > 0) {
          bdr.begin_slice_update();
        }
        const unsigned n = rng() % 3 == 0 ? 0 : rng() % 4;
        for (unsigned i = 0; i < n; ++i) {
          const unsigned r = 1 + rng() % 23;
          bdr.record(r);
          list.insert(t, r);
        }
        if (v != Variant::drv_direct) {
          bdr.end_slice_update();
        }
        ASSERT_EQ(bdr.get_lbp1(k), list.query(t, k)) << variant_name(v) << " k=" << k << " t=" << t;
      }
    }
  }
}

TEST(Lfpm, MeanLengthNearLogOfInserts) {
  std::mt19937 rng(29);
  // One insert per slice with geometric ranks, like a register receiving hashed elements.
  for (int n : {100, 1000, 10000}) {
    double total = 0;
    constexpr int kLists = 200;
    for (int l = 0; l < kLists; ++l) {
      LfpmList list;
      for (int i = 0; i < n; ++i) {
        list.insert(i, lbp1(static_cast<std::uint32_t>(rng()), 32));
      }
      total += static_cast<double>(list.size());
    }
    const double mean = total / kLists;
    EXPECT_GT(mean, std::log(n) / 2) << n;
    EXPECT_LT(mean, std::log(n) * 2) << n;
  }
}

TEST(LfpmPool, ReadoutsMatchBdrPool) {
  std::mt19937 rng(41);
  PoolConfig c;
  c.m = 1u << 10;
  c.b = 5;
  c.k = 3;
  LfpmPool lfpm(c);
  BdrPool pool(c);
  for (std::int64_t s = 0; s < 10; ++s) {
    for (int i = 0; i < 700; ++i) {
      const std::uint32_t aip = rng() % 12;
      const std::uint32_t bip = rng();
      lfpm.scan_pair(s, aip, bip);
      pool.scan_pair(aip, bip);
    }
    pool.advance_slice();
    EXPECT_EQ(lfpm.all_registers(s), pool.all_registers());
    EXPECT_DOUBLE_EQ(lfpm.estimate(3, s), pool.estimate(3));
  }
}

TEST(Generator, ExactDistinctCount) {
  GenConfig c;
  c.slices = 1;
  c.k = 1;
  c.hosts.push_back({7, 100, 0.0, 0, -1});
  const auto stream = generate(c);
  std::set<std::uint32_t> bips;
  for (const auto& e : stream.events) {
    EXPECT_EQ(e.aip, 7u);
    bips.insert(e.bip);
  }
  EXPECT_EQ(bips.size(), 100u);
  ASSERT_EQ(stream.truth.size(), 1u);
  EXPECT_EQ(stream.truth[0].cardinality, 100u);
}

TEST(Generator, Deterministic) {
  GenConfig c;
  c.seed = 77;
  c.slices = 5;
  c.k = 3;
  c.hosts.push_back({1, 50, 0.5, 1, 3});
  c.background_hosts = 20;
  c.background_n = 10;
  const auto a = generate(c);
  const auto b = generate(c);
  EXPECT_EQ(a.events, b.events);
  EXPECT_EQ(a.truth, b.truth);
  c.seed = 78;
  EXPECT_NE(generate(c).events, a.events);
}

TEST(Generator, ClosedLoopWithOracle) {
  GenConfig c;
  c.seed = 5;
  c.slices = 12;
  c.slice_len = 2.0;
  c.origin = 100.0;
  c.k = 4;
  c.hosts = {{1, 40, 0.25, 0, -1}, {2, 10, 1.0, 3, 7}, {3, 5, 0.0, 0, 2}, {4, 30, 0.5, 9, -1}};
  c.background_hosts = 30;
  c.background_n = 8;
  const auto stream = generate(c);
  const SliceClock clock(c.slice_len, c.origin);
  ExactOracle oracle(c.k);
  std::size_t next = 0;
  std::size_t checked = 0;
  for (std::int64_t s = 0; s < c.slices; ++s) {
    while (next < stream.events.size() && clock.slice_of(stream.events[next].ts) == s) {
      oracle.ingest(s, stream.events[next].aip, stream.events[next].bip);
      ++next;
    }
    for (const auto& row : stream.truth) {
      if (row.window.last == s) {
        EXPECT_EQ(oracle.cardinality(row.aip, row.window), row.cardinality) << row.aip << " @" << s;
        ++checked;
      }
    }
  }
  EXPECT_EQ(next, stream.events.size());
  EXPECT_EQ(checked, 4u * 12u);
}

TEST(Generator, WindowCardinalityClosedForm) {
  const HostSpec h{1, 100, 0.3, 2, 8};
  EXPECT_EQ(window_cardinality(h, {0, 1}, 20), 0u);
  EXPECT_EQ(window_cardinality(h, {0, 2}, 20), 100u);
  EXPECT_EQ(window_cardinality(h, {2, 5}, 20), 100u + 3 * 30);
  EXPECT_EQ(window_cardinality(h, {7, 12}, 20), 100u + 1 * 30);
}

TEST(Generator, RejectsInfeasible) {
  GenConfig c;
  c.slices = 3;
  c.hosts = {{1, 10, 1.5, 0, -1}};
  EXPECT_THROW(generate(c), ConfigError);
  c.hosts = {{1, 10, 0.5, 0, -1}, {1, 20, 0.5, 0, -1}};
  EXPECT_THROW(generate(c), ConfigError);
  c.slices = 3;
  c.hosts = {{1, 4000000000u, 1.0, 0, -1}};
  EXPECT_THROW(generate(c), ConfigError);
}

TEST(Generator, ParseConfig) {
  std::istringstream in(
      "# traffic\nseed=9\nslices=6\nslice_len=0.5\norigin=10\nk=3\nhost=10.0.0.1,200,0.5\nhost=5,10,1,2,4\n"
      "background_hosts=4\nbackground_n=7\n");
  const auto c = parse_gen_config(in);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.slices, 6);
  EXPECT_DOUBLE_EQ(c.slice_len, 0.5);
  EXPECT_DOUBLE_EQ(c.origin, 10.0);
  EXPECT_EQ(c.k, 3u);
  ASSERT_EQ(c.hosts.size(), 2u);
  EXPECT_EQ(c.hosts[0], (HostSpec{0x0A000001u, 200, 0.5, 0, -1}));
  EXPECT_EQ(c.hosts[1], (HostSpec{5, 10, 1.0, 2, 4}));
  EXPECT_EQ(c.background_hosts, 4u);
  std::istringstream bad("slices=abc\n");
  EXPECT_THROW(parse_gen_config(bad), ParseError);
  std::istringstream unknown("color=blue\n");
  EXPECT_THROW(parse_gen_config(unknown), ParseError);
}

TEST(Generator, CsvWriters) {
  std::ostringstream ev;
  const std::vector<IpPairEvent> events{{1.25, 0x0A000001u, 3}};
  write_events(ev, events);
  EXPECT_EQ(ev.str(), "1.250000,10.0.0.1,0.0.0.3\n");
  std::ostringstream tr;
  const std::vector<TruthRow> rows{{0x0A000001u, {2, 5}, 17}};
  write_truth_csv(tr, rows);
  EXPECT_EQ(tr.str(), "aip,window_start,window_end,true_cardinality\n10.0.0.1,2,5,17\n");
}
