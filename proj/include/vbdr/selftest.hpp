#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace vbdr {

struct SelftestOptions {
  std::uint64_t seed = 1;
  unsigned workers = 4;
  unsigned streams = 20;
  // Negative control: boundaries stop aging registers, which must make the run fail.
  bool inject_skip_slide = false;
};

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestReport {
  std::vector<SelftestCheck> checks;

  [[nodiscard]] bool passed() const noexcept;
};

// Reduced-scale property suites: windowed max vs a brute-force replay, LFPM vs
// BDR, cross-variant agreement, and parallel vs serial scanning.
SelftestReport run_selftest(const SelftestOptions& options);

void print_selftest(std::ostream& out, const SelftestReport& report);

} // namespace vbdr
