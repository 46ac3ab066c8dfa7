#ifndef XCHAN_RATES_HPP
#define XCHAN_RATES_HPP

#include <optional>
#include <string>
#include <vector>

#include "xchan/channel.hpp"
#include "xchan/rational.hpp"

namespace xchan {

enum class CaseTag { kI, kII, kIII, kIV, kV };

std::string to_string(CaseTag tag);

// Per-message rates in bits per channel use. The direct messages split
// into common (top levels, visible at both receivers) and private
// (bottom levels, visible only at the intended receiver) portions.
struct RateAllocation {
  int r11c = 0;
  int r11p = 0;
  int r12 = 0;
  int r21 = 0;
  int r22c = 0;
  int r22p = 0;
  CaseTag case_tag = CaseTag::kI;

  int sum_rate() const { return r11c + r11p + r12 + r21 + r22c + r22p; }
  friend bool operator==(const RateAllocation&, const RateAllocation&);
};

// Which of the five allocation regimes n12+n21 falls into, after
// relabeling so the second direct link is the stronger one.
CaseTag classify_case(const ChannelLevels& levels);

// Ideal allocation (no outage penalty), exactly the per-case formulas
// including floors; relabels internally when n11 > n22.
RateAllocation allocate(const ChannelLevels& levels);

enum class LinkModel { kDet, kGauss };

struct ConditionReport {
  bool pass = false;
  std::vector<std::string> violated;  // labels like "rx1.a", "rx2.c"
};

// Decoding-condition checkers. `ideal` drops the log(./delta) penalty
// term (the deterministic conditions then have no slack constant; the
// Gaussian ones keep their fixed -6 offsets). Inequalities whose rates
// are all zero are skipped per the stated removal rules.
ConditionReport check_det_conditions(const RateAllocation& a,
                                     const ChannelLevels& levels, double delta,
                                     bool ideal = false);
ConditionReport check_gauss_conditions(const RateAllocation& a,
                                       const ChannelLevels& levels,
                                       double delta, bool ideal = false);

// Starts from allocate(levels) and trims rates (common first, then the
// cross messages, then the private parts) until the model's decoding
// conditions pass. For the Gaussian model the rates are first clamped to
// the guard-reduced modulation windows. Empty when even the all-zero
// allocation fails the conditions.
std::optional<RateAllocation> allocate_penalized(const ChannelLevels& levels,
                                                 double delta,
                                                 LinkModel model);

// Per-portion capacity of the Gaussian modulation windows, two guard
// bits removed from each portion.
struct GaussWindowCaps {
  int r11c = 0, r11p = 0, r12 = 0, r21 = 0, r22c = 0, r22p = 0;
};
GaussWindowCaps gauss_window_caps(const ChannelLevels& levels);

// Capacity approximation D = min{d1..d4} + offset, kept exact (d2..d4
// may be half- or third-integers).
struct CapacityApprox {
  Rational d1, d2, d3, d4;
  Rational d;
  int offset = 0;
  static constexpr long long kC1 = 128;           // deterministic gap constant
  static constexpr long long kC2 = 1LL << 31;     // Gaussian gap constant
};

CapacityApprox capacity_approx(const ChannelLevels& levels);

}  // namespace xchan

#endif  // XCHAN_RATES_HPP
