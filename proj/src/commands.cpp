#include "vbdr/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>

#include "vbdr/errors.hpp"
#include "vbdr/lfpm.hpp"
#include "vbdr/memory.hpp"
#include "vbdr/oracle.hpp"
#include "vbdr/parallel.hpp"
#include "vbdr/snapshot.hpp"

namespace vbdr {

ScanSummary run_scan(std::istream& in, std::ostream& out, std::ostream& log, const EngineConfig& config,
                     double threshold, std::ostream* snapshot) {
  ScanSummary summary;
  WindowEngine engine(config);
  write_top_csv_header(out);
  engine.on_boundary([&](const WindowEngine& e) {
    ++summary.boundaries;
    const auto rows = e.query_top(threshold);
    write_top_csv(out, rows, e.window());
  });

  std::vector<IpPairEvent> chunk;
  constexpr std::size_t kChunk = std::size_t{1} << 16;
  std::optional<double> last_ts;
  const auto flush = [&] {
    engine.ingest_batch(chunk);
    chunk.clear();
  };

  std::string line;
  while (std::getline(in, line)) {
    ++summary.lines;
    std::optional<IpPairEvent> event;
    try {
      event = parse_event_line(line);
    } catch (const ParseError& e) {
      ++summary.malformed;
      log << "warning: line " << summary.lines << ": " << e.what() << '\n';
      continue;
    }
    if (!event) {
      continue;
    }
    // Order is checked here so a rejected event never aborts a batch.
    const bool before_origin = config.origin && event->ts < *config.origin;
    if ((last_ts && event->ts < *last_ts) || before_origin) {
      ++summary.out_of_order;
      log << "warning: line " << summary.lines << ": out-of-order timestamp " << event->ts << ", skipped\n";
      continue;
    }
    last_ts = event->ts;
    ++summary.events;
    chunk.push_back(*event);
    if (chunk.size() >= kChunk) {
      flush();
    }
  }
  flush();
  if (summary.events > 0) {
    engine.finish();
  }
  if (snapshot != nullptr) {
    write_snapshot(*snapshot, engine.pool());
  }
  return summary;
}

namespace {

struct Scored {
  std::vector<double> errors;
  double seconds = 0.0;
};

double rel_err(double estimate, std::uint64_t truth) {
  return std::abs(estimate - static_cast<double>(truth)) / static_cast<double>(truth);
}

BenchRow summarize(std::string name, Scored scored, std::uint64_t events) {
  BenchRow row;
  row.estimator = std::move(name);
  row.samples = scored.errors.size();
  auto& e = scored.errors;
  if (!e.empty()) {
    std::sort(e.begin(), e.end());
    double sum = 0.0;
    for (double x : e) {
      sum += x;
    }
    const auto rank = [&](double q) {
      const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(e.size())));
      return e[std::clamp<std::size_t>(idx, 1, e.size()) - 1];
    };
    row.mean_rel_err = sum / static_cast<double>(e.size());
    row.p50_rel_err = rank(0.50);
    row.p95_rel_err = rank(0.95);
    row.max_rel_err = e.back();
  }
  row.events_per_sec = scored.seconds > 0.0 ? static_cast<double>(events) / scored.seconds : 0.0;
  return row;
}

using Clock = std::chrono::steady_clock;

double since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

} // namespace

BenchReport run_bench(const GenConfig& gen_config, const PoolConfig& pool_config, unsigned workers) {
  pool_config.validate();
  if (!pool_config.can_estimate()) {
    throw ConfigError("bench needs g and m with a tabulated HLL constant");
  }
  GenConfig gen = gen_config;
  gen.k = pool_config.k;
  const auto stream = generate(gen);
  const SliceClock clock(gen.slice_len, gen.origin);

  // Events grouped per slice; the generator emits them slice-major.
  std::vector<std::span<const IpPairEvent>> slices(static_cast<std::size_t>(gen.slices));
  {
    std::size_t start = 0;
    const std::span<const IpPairEvent> all(stream.events);
    for (std::size_t i = 0; i <= all.size(); ++i) {
      if (i == all.size() || clock.slice_of(all[i].ts) != clock.slice_of(all[start].ts)) {
        if (i > start) {
          slices[static_cast<std::size_t>(clock.slice_of(all[start].ts))] = all.subspan(start, i - start);
        }
        start = i;
      }
    }
  }
  std::multimap<std::int64_t, const TruthRow*> truth_at;
  for (const auto& row : stream.truth) {
    if (row.cardinality > 0) {
      truth_at.emplace(row.window.last, &row);
    }
  }
  const auto n_events = static_cast<std::uint64_t>(stream.events.size());

  BenchReport report;
  for (Variant v : {Variant::serial, Variant::bitset, Variant::drv_direct}) {
    PoolConfig config = pool_config;
    config.variant = v;
    BdrPool pool(config);
    Scored scored;
    for (std::int64_t s = 0; s < gen.slices; ++s) {
      const auto start = Clock::now();
      const auto events = slices[static_cast<std::size_t>(s)];
      if (workers > 1 && v != Variant::serial) {
        scan_batch(pool, ScanBatch{events, workers});
        boundary_parallel(pool, workers);
      } else {
        for (const auto& e : events) {
          pool.scan_pair(e.aip, e.bip);
        }
        pool.advance_slice();
      }
      scored.seconds += since(start);
      const auto [lo, hi] = truth_at.equal_range(s);
      if (lo != hi) {
        const double total = pool.pool_estimate();
        for (auto it = lo; it != hi; ++it) {
          scored.errors.push_back(rel_err(pool.estimate(it->second->aip, total), it->second->cardinality));
        }
      }
    }
    auto row = summarize("vbdr-" + std::string(variant_name(v)), std::move(scored), n_events);
    row.bits_per_counter = static_cast<double>(bdr_bits(v, config.b, config.k));
    row.total_bits = bdr_bits(v, config.b, config.k) * config.m;
    report.rows.push_back(std::move(row));
  }

  {
    LfpmPool pool(pool_config);
    Scored scored;
    double cells = 0.0;
    for (std::int64_t s = 0; s < gen.slices; ++s) {
      const auto start = Clock::now();
      for (const auto& e : slices[static_cast<std::size_t>(s)]) {
        pool.scan_pair(s, e.aip, e.bip);
      }
      scored.seconds += since(start);
      cells += pool.mean_cells(s);
      const auto [lo, hi] = truth_at.equal_range(s);
      if (lo != hi) {
        const double total = pool.pool_estimate(s);
        for (auto it = lo; it != hi; ++it) {
          scored.errors.push_back(rel_err(pool.estimate(it->second->aip, s, total), it->second->cardinality));
        }
      }
    }
    auto row = summarize("lfpm-hll", std::move(scored), n_events);
    const double bits = gen.slices > 0 ? LfpmList::kCellBits * cells / static_cast<double>(gen.slices) : 0.0;
    row.bits_per_counter = bits;
    row.total_bits = static_cast<std::uint64_t>(std::llround(bits * pool_config.m));
    report.rows.push_back(std::move(row));
  }

  {
    ExactOracle oracle(pool_config.k);
    Scored scored;
    std::uint64_t peak = 0;
    for (std::int64_t s = 0; s < gen.slices; ++s) {
      const auto start = Clock::now();
      for (const auto& e : slices[static_cast<std::size_t>(s)]) {
        oracle.ingest(s, e.aip, e.bip);
      }
      scored.seconds += since(start);
      peak = std::max(peak, oracle.entries());
      const auto [lo, hi] = truth_at.equal_range(s);
      for (auto it = lo; it != hi; ++it) {
        const auto exact = oracle.cardinality(it->second->aip, it->second->window);
        scored.errors.push_back(rel_err(static_cast<double>(exact), it->second->cardinality));
      }
    }
    auto row = summarize("exact", std::move(scored), n_events);
    row.total_bits = peak * 64; // one (aip, bip) pair per stored entry
    report.rows.push_back(std::move(row));
  }
  return report;
}

void print_bench(std::ostream& out, const BenchReport& report, bool timing) {
  out << "estimator,samples,mean_rel_err,p50_rel_err,p95_rel_err,max_rel_err,bits_per_counter,total_bits,events_per_sec\n";
  char buf[256];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof(buf), "%s,%zu,%.6f,%.6f,%.6f,%.6f,", r.estimator.c_str(), r.samples, r.mean_rel_err,
                  r.p50_rel_err, r.p95_rel_err, r.max_rel_err);
    out << buf;
    if (r.bits_per_counter) {
      std::snprintf(buf, sizeof(buf), "%.2f", *r.bits_per_counter);
      out << buf;
    } else {
      out << '-';
    }
    out << ',' << r.total_bits << ',';
    if (timing) {
      std::snprintf(buf, sizeof(buf), "%.0f", r.events_per_sec);
      out << buf;
    } else {
      out << '-';
    }
    out << '\n';
  }
}

} // namespace vbdr
