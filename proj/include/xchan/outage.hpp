#ifndef XCHAN_OUTAGE_HPP
#define XCHAN_OUTAGE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "xchan/gauss_link.hpp"

namespace xchan {

struct OutageEstimate {
  std::uint64_t samples = 0;
  std::uint64_t failures = 0;
  double estimate = 0;  // failures / samples
  double wilson_lo = 0;
  double wilson_hi = 0;
  std::uint64_t seed = 0;
};

// Fraction of gain samples on (1,2]^{2x3} for which either receiver's
// stacked decoding system is linearly dependent.
OutageEstimate mc_outage_det(const ChannelLevels& levels,
                             const RateAllocation& a, std::uint64_t samples,
                             std::uint64_t seed);

// Re-runs one indexed sample and reports whether it fails.
bool replay_outage_det(const ChannelLevels& levels, const RateAllocation& a,
                       std::uint64_t seed, std::uint64_t index);

// Fraction of fine-gain samples on (1,2]^{2x2} with minimum constellation
// distance below `threshold` at either receiver.
OutageEstimate mc_outage_gauss(const ChannelLevels& levels,
                               const RateAllocation& a, std::uint64_t samples,
                               std::uint64_t seed, double threshold = 32.0,
                               std::uint64_t budget = kDefaultEnumBudget);

bool replay_outage_gauss(const ChannelLevels& levels, const RateAllocation& a,
                         std::uint64_t seed, std::uint64_t index,
                         double threshold = 32.0,
                         std::uint64_t budget = kDefaultEnumBudget);

// Parameters of the small-denominator event
//   |g0 q0 + a1 g1 q1 + a2 g2 q2| < beta  for some |q_k| <= Q_k, q != 0,
// over (g0,g1,g2) in (1,4]^3.
struct GroshevParams {
  double beta = 1.0;
  std::int64_t a1 = 1, a2 = 1;
  std::int64_t q0 = 1, q1 = 1, q2 = 1;
  void validate() const;
  double q1_tilde() const;
  double q2_tilde() const;
};

// Analytic upper bound on the Lebesgue measure of the event.
double groshev_bound(const GroshevParams& p);

// Volume of the sampled gain cube; measure = estimate * this.
inline constexpr double kGroshevVolume = 27.0;

// Monte Carlo estimate of the event probability (multiply by
// kGroshevVolume for the measure). The integer box is enumerated exactly.
OutageEstimate mc_groshev_measure(const GroshevParams& p,
                                  std::uint64_t samples, std::uint64_t seed,
                                  std::uint64_t box_budget = 10'000'000);

bool replay_groshev(const GroshevParams& p, std::uint64_t seed,
                    std::uint64_t index);

// Two-user multiple-access demonstration map over (h1,h2) in (1,2]^2:
// a cell is in outage (black) when some distinct input pair at signal
// strength 2^n lands within distance 2 at the receiver.
struct MacMap {
  int n = 0;
  int grid = 0;
  int q1_levels = 8;
  int q2_levels = 2;
  std::vector<std::uint8_t> black;  // row-major, index = row*grid+col
  double black_fraction = 0;
  int mid_row_strips = 0;  // black runs across the middle row

  bool is_black(int row, int col) const {
    return black[static_cast<std::size_t>(row) * grid + col] != 0;
  }
};

MacMap mac_outage_map(int n, int grid, int q1_levels = 8, int q2_levels = 2);

// Membership test at an exact gain pair.
bool mac_cell_black(double h1, double h2, int n, int q1_levels = 8,
                    int q2_levels = 2);

// Brute force over all distinct input pairs; returns the minimum received
// pair distance and whether some pair violates the threshold.
struct MacCellCheck {
  bool black = false;
  double min_pair_distance = 0;
  double u1 = 0, u2 = 0, u1p = 0, u2p = 0;  // witness pair when black
};
MacCellCheck mac_cell_check_bruteforce(double h1, double h2, int n,
                                       int q1_levels = 8, int q2_levels = 2);

// P5 PGM, maxval 255, 0 = black (outage). Rows run from high h2 to low.
void write_pgm(const MacMap& map, const std::string& path);
void write_csv(const MacMap& map, const std::string& path);

}  // namespace xchan

#endif  // XCHAN_OUTAGE_HPP
