// vbdr: sliding-window per-host cardinality estimation from IP-pair streams.
//
//   vbdr scan --input pairs.csv --k 300 --b 9 --m 65536 --variant gsmall
//   vbdr bench --gen traffic.conf
//   vbdr selftest --workers 8
//   vbdr memory --b 8 --k 15
//   vbdr generate --gen traffic.conf --output pairs.csv --truth truth.csv

#include <fstream>
#include <iostream>
#include <algorithm>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "vbdr/commands.hpp"
#include "vbdr/errors.hpp"
#include "vbdr/generator.hpp"
#include "vbdr/memory.hpp"
#include "vbdr/selftest.hpp"

namespace {

struct RunConfig {
  vbdr::PoolConfig pool;
  std::string variant = "gsmall";
  double slice_len = 1.0;
  std::optional<double> origin;
  std::string input = "-";
  std::string output = "-";
  unsigned workers = 1;
  double threshold = 0.0;
  std::size_t candidates = std::size_t{1} << 20;
  std::string config_file;
  std::string gen_file;
  std::string truth_file;
  std::string snapshot_file;
  bool no_timing = false;
  double n_per_counter = 1e4;
  std::uint64_t seed = 1;
  unsigned streams = 20;
  std::string fault;
};

void add_pool_options(CLI::App* app, RunConfig& rc) {
  app->add_option("--k", rc.pool.k, "Window length in slices")->capture_default_str();
  app->add_option("--b", rc.pool.b, "Virtual vector log-size (g = 2^b)")->capture_default_str();
  app->add_option("--m", rc.pool.m, "Physical registers in the pool")->capture_default_str();
  app->add_option("--zbits", rc.pool.zbits, "Recorder width in bits (0 = derive from k)")->capture_default_str();
  app->add_option("--variant", rc.variant, "Register variant")
      ->check(CLI::IsMember({"serial", "gfast", "gsmall"}))
      ->capture_default_str();
  app->add_option("--seed-a0", rc.pool.seeds.a0, "Seed for virtual-to-physical mapping")->capture_default_str();
  app->add_option("--seed-a1", rc.pool.seeds.a1, "Seed for opposite-host mixing")->capture_default_str();
  app->add_option("--workers", rc.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--config", rc.config_file, "key=value file; flags given on the command line win");
}

// Fills options not given on the command line from a key=value file.
void apply_config_file(CLI::App* app, const std::string& path) {
  if (path.empty()) {
    return;
  }
  std::ifstream in(path);
  if (!in) {
    throw vbdr::ConfigError("cannot open config file " + path);
  }
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        throw vbdr::ConfigError("config line without '=': " + line);
      }
      continue;
    }
    auto key = CLI::detail::trim_copy(line.substr(0, eq));
    const auto value = CLI::detail::trim_copy(line.substr(eq + 1));
    std::replace(key.begin(), key.end(), '_', '-');
    CLI::Option* opt = app->get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config") {
      throw vbdr::ConfigError("unknown config key '" + key + "'");
    }
    if (opt->count() == 0) {
      opt->add_result(value);
      opt->run_callback();
    }
  }
}

void finalize_pool(RunConfig& rc) {
  rc.pool.variant = *vbdr::parse_variant(rc.variant);
  rc.pool.validate();
}

std::ostream& open_output(const std::string& path, std::unique_ptr<std::ofstream>& holder) {
  if (path == "-") {
    return std::cout;
  }
  holder = std::make_unique<std::ofstream>(path);
  if (!*holder) {
    throw vbdr::ConfigError("cannot write " + path);
  }
  return *holder;
}

vbdr::GenConfig load_gen(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw vbdr::ConfigError("cannot open generator config " + path);
  }
  return vbdr::parse_gen_config(in);
}

int cmd_scan(CLI::App* app, RunConfig& rc) {
  apply_config_file(app, rc.config_file);
  finalize_pool(rc);
  if (!rc.pool.can_estimate()) {
    throw vbdr::ConfigError("scan needs g and m in {16, 32, 64} or powers of two >= 128");
  }
  vbdr::EngineConfig ec;
  ec.pool = rc.pool;
  ec.slice_len = rc.slice_len;
  ec.origin = rc.origin;
  ec.workers = rc.workers;
  ec.candidate_capacity = rc.candidates;

  std::unique_ptr<std::ifstream> in_file;
  std::istream* in = &std::cin;
  if (rc.input != "-") {
    in_file = std::make_unique<std::ifstream>(rc.input);
    if (!*in_file) {
      throw vbdr::ConfigError("cannot open input " + rc.input);
    }
    in = in_file.get();
  }
  std::unique_ptr<std::ofstream> out_file;
  auto& out = open_output(rc.output, out_file);
  std::unique_ptr<std::ofstream> snap;
  if (!rc.snapshot_file.empty()) {
    snap = std::make_unique<std::ofstream>(rc.snapshot_file, std::ios::binary);
    if (!*snap) {
      throw vbdr::ConfigError("cannot write " + rc.snapshot_file);
    }
  }
  const auto summary = vbdr::run_scan(*in, out, std::cerr, ec, rc.threshold, snap.get());
  std::cerr << "lines=" << summary.lines << " events=" << summary.events << " malformed=" << summary.malformed
            << " out_of_order=" << summary.out_of_order << " boundaries=" << summary.boundaries << '\n';
  return 0;
}

int cmd_bench(CLI::App* app, RunConfig& rc) {
  apply_config_file(app, rc.config_file);
  finalize_pool(rc);
  const auto gen = load_gen(rc.gen_file);
  const auto report = vbdr::run_bench(gen, rc.pool, rc.workers);
  std::unique_ptr<std::ofstream> out_file;
  vbdr::print_bench(open_output(rc.output, out_file), report, !rc.no_timing);
  return 0;
}

int cmd_memory(CLI::App* app, RunConfig& rc) {
  apply_config_file(app, rc.config_file);
  finalize_pool(rc);
  vbdr::print_memory_report(std::cout, rc.pool, vbdr::memory_report(rc.pool), rc.n_per_counter);
  return 0;
}

int cmd_generate(RunConfig& rc) {
  const auto stream = vbdr::generate(load_gen(rc.gen_file));
  std::unique_ptr<std::ofstream> out_file;
  vbdr::write_events(open_output(rc.output, out_file), stream.events);
  if (!rc.truth_file.empty()) {
    std::ofstream truth(rc.truth_file);
    if (!truth) {
      throw vbdr::ConfigError("cannot write " + rc.truth_file);
    }
    vbdr::write_truth_csv(truth, stream.truth);
  }
  return 0;
}

int cmd_selftest(RunConfig& rc) {
  vbdr::SelftestOptions options;
  options.seed = rc.seed;
  options.workers = rc.workers;
  options.streams = rc.streams;
  options.inject_skip_slide = rc.fault == "skip-slide";
  const auto report = vbdr::run_selftest(options);
  vbdr::print_selftest(std::cout, report);
  return report.passed() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sliding-window host cardinality estimation with shared bit distance recorders"};
  app.require_subcommand(1);
  RunConfig rc;

  auto* scan = app.add_subcommand("scan", "Estimate cardinalities of hosts seen in an IP-pair stream");
  add_pool_options(scan, rc);
  scan->add_option("--input", rc.input, "ts,aip,bip lines ('-' for stdin)")->capture_default_str();
  scan->add_option("--output", rc.output, "CSV output ('-' for stdout)")->capture_default_str();
  scan->add_option("--slice-len", rc.slice_len, "Slice length in seconds")->capture_default_str();
  scan->add_option("--origin", rc.origin, "Start of slice 0 (default: first event, slice aligned)");
  scan->add_option("--threshold", rc.threshold, "Report hosts with estimate >= threshold")->capture_default_str();
  scan->add_option("--candidates", rc.candidates, "Capacity of the recent-host set")->capture_default_str();
  scan->add_option("--snapshot", rc.snapshot_file, "Write the final pool snapshot here");

  auto* bench = app.add_subcommand("bench", "Compare VBDR variants, LFPM-HLL and the exact oracle");
  add_pool_options(bench, rc);
  bench->add_option("--gen", rc.gen_file, "Generator config (key=value)")->required();
  bench->add_option("--output", rc.output, "Report CSV ('-' for stdout)")->capture_default_str();
  bench->add_flag("--no-timing", rc.no_timing, "Omit throughput so reports are reproducible");

  auto* selftest = app.add_subcommand("selftest", "Run the property suites at reduced scale");
  selftest->add_option("--seed", rc.seed, "RNG seed")->capture_default_str();
  selftest->add_option("--workers", rc.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  selftest->add_option("--streams", rc.streams, "Random streams per suite")->capture_default_str();
  selftest->add_option("--inject-fault", rc.fault, "Negative control")->check(CLI::IsMember({"skip-slide"}));

  auto* memory = app.add_subcommand("memory", "Print per-register memory for a configuration");
  add_pool_options(memory, rc);
  memory->add_option("--n", rc.n_per_counter, "Inserts per counter for the LFPM comparison")->capture_default_str();

  auto* gen = app.add_subcommand("generate", "Write a synthetic stream and its ground truth");
  gen->add_option("--gen", rc.gen_file, "Generator config (key=value)")->required();
  gen->add_option("--output", rc.output, "Event output ('-' for stdout)")->capture_default_str();
  gen->add_option("--truth", rc.truth_file, "Ground-truth CSV sidecar");

  CLI11_PARSE(app, argc, argv);

  try {
    if (scan->parsed()) {
      return cmd_scan(scan, rc);
    }
    if (bench->parsed()) {
      return cmd_bench(bench, rc);
    }
    if (selftest->parsed()) {
      return cmd_selftest(rc);
    }
    if (memory->parsed()) {
      return cmd_memory(memory, rc);
    }
    if (gen->parsed()) {
      return cmd_generate(rc);
    }
  } catch (const vbdr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
