#include "vbdr/estimator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vbdr/errors.hpp"

namespace vbdr {

bool hll_size_supported(std::size_t s) noexcept {
  return s == 16 || s == 32 || s == 64 || (s >= 128 && std::has_single_bit(s));
}

double hll_alpha(std::size_t s) {
  switch (s) {
  case 16:
    return 0.673;
  case 32:
    return 0.697;
  case 64:
    return 0.709;
  default:
    break;
  }
  if (!hll_size_supported(s)) {
    throw std::invalid_argument("no HLL bias constant for " + std::to_string(s) + " registers");
  }
  return 0.7213 / (1.0 + 1.079 / static_cast<double>(s));
}

double raw_hll_estimate(std::span<const unsigned> ranks) {
  const std::size_t s = ranks.size();
  const double alpha = hll_alpha(s);
  double harmonic = 0.0;
  std::size_t zeros = 0;
  for (unsigned r : ranks) {
    harmonic += std::ldexp(1.0, -static_cast<int>(r));
    zeros += r == 0 ? 1 : 0;
  }
  const double sd = static_cast<double>(s);
  const double estimate = alpha * sd * sd / harmonic;
  if (estimate <= 2.5 * sd && zeros > 0) {
    return sd * std::log(sd / static_cast<double>(zeros));
  }
  return estimate;
}

double shared_register_estimate(double host_estimate, std::size_t g, double pool_estimate, std::size_t m) {
  if (g >= m) {
    throw ConfigError("virtual vector size must be smaller than the pool");
  }
  const double gd = static_cast<double>(g);
  const double md = static_cast<double>(m);
  const double scale = md * gd / (md - gd);
  return std::max(0.0, scale * (host_estimate / gd - pool_estimate / md));
}

} // namespace vbdr
