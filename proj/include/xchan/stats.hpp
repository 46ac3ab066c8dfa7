#ifndef XCHAN_STATS_HPP
#define XCHAN_STATS_HPP

#include <cmath>
#include <cstdint>
#include <utility>

namespace xchan {

// Wilson score interval for a binomial proportion, 95% coverage.
// Stays valid at zero or near-zero failure counts.
inline std::pair<double, double> wilson95(std::uint64_t failures,
                                          std::uint64_t samples) {
  if (samples == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double n = static_cast<double>(samples);
  const double p = static_cast<double>(failures) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  double lo = center - half;
  double hi = center + half;
  if (lo < 0.0) lo = 0.0;
  if (hi > 1.0) hi = 1.0;
  return {lo, hi};
}

inline double binomial_sigma(double p, std::uint64_t samples) {
  if (samples == 0) return 1.0;
  double q = p * (1.0 - p);
  if (q < 0.0) q = 0.0;
  return std::sqrt(q / static_cast<double>(samples));
}

// Upper tail of the standard normal, Q(x) = P(Z >= x).
inline double gaussian_q(double x) {
  return 0.5 * std::erfc(x / 1.4142135623730950488);
}

}  // namespace xchan

#endif  // XCHAN_STATS_HPP
