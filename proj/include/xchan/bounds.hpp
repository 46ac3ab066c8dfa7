#ifndef XCHAN_BOUNDS_HPP
#define XCHAN_BOUNDS_HPP

#include <array>
#include <string>
#include <vector>

#include "xchan/rates.hpp"

namespace xchan {

// Ten linear constraints on (R11, R12, R21, R22). Coefficient patterns
// are fixed; the right-hand sides depend on the channel. Order:
//   a:  R11+R12+R22          b:  R11+R21+R22
//   c:  R11+R12+R21          d:  R12+R21+R22
//   e,f: full sum            g..j: one rate doubled (R11, R12, R21, R22)
inline constexpr int kNumBounds = 10;
inline constexpr std::array<std::array<int, 4>, kNumBounds> kBoundCoeffs = {{
    {1, 1, 0, 1},
    {1, 0, 1, 1},
    {1, 1, 1, 0},
    {0, 1, 1, 1},
    {1, 1, 1, 1},
    {1, 1, 1, 1},
    {2, 1, 1, 1},
    {1, 2, 1, 1},
    {1, 1, 2, 1},
    {1, 1, 1, 2},
}};
inline constexpr std::array<const char*, kNumBounds> kBoundLabels = {
    "a", "b", "c", "d", "e", "f", "g", "h", "i", "j"};

template <typename Scalar>
struct BoundSet {
  std::array<Scalar, kNumBounds> rhs{};
};

// Integer-valued deterministic bounds.
BoundSet<Rational> det_bounds(const ChannelLevels& levels);

// Gaussian bounds (half-log expressions evaluated in floating point).
BoundSet<double> gauss_bounds(const ChannelLevels& levels, const FineGains& h);

template <typename Scalar>
struct LpResult {
  Scalar optimum{};
  std::array<Scalar, 4> vertex{};
  std::vector<std::string> active;  // binding constraint labels
};

// Max of R11+R12+R21+R22 over the nonnegative orthant cut by the ten
// constraints, by exhaustive vertex enumeration. The deterministic
// variant is exact (integer determinants, rational output).
LpResult<Rational> max_sum_rate(const BoundSet<Rational>& bounds);
LpResult<double> max_sum_rate(const BoundSet<double>& bounds);

// Whether a rate 4-tuple satisfies every bound.
bool feasible(const BoundSet<Rational>& bounds,
              const std::array<Rational, 4>& rates);

// The four combined Gaussian sum-rate bounds: average of a-d, then e,
// then (d+g)/2, then (c+j)/2.
std::array<double, 4> combined_gauss_bounds(const BoundSet<double>& bounds);

struct SandwichReport {
  Rational capacity_approx;  // D
  Rational lp_optimum;
  int alloc_sum = 0;
  bool alloc_in_window = false;  // D-4 <= alloc_sum <= D
  bool lp_below_d = false;       // LP <= D
  bool alloc_feasible = false;   // ideal allocation satisfies all bounds
  bool lp_at_least_alloc = false;
  bool lp_equals_d = false;      // reported, not asserted
  bool ok = false;
  std::vector<std::string> violations;
};

SandwichReport sandwich_check(const ChannelLevels& levels);

// min of the combined Gaussian bounds <= D + 4.
struct GaussSandwichReport {
  double min_combined = 0;
  double d_plus_4 = 0;
  bool ok = false;
};
GaussSandwichReport sandwich_check_gauss(const ChannelLevels& levels,
                                         const FineGains& h);

}  // namespace xchan

#endif  // XCHAN_BOUNDS_HPP
