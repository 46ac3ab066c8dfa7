#ifndef XCHAN_GAUSS_LINK_HPP
#define XCHAN_GAUSS_LINK_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "xchan/det_link.hpp"

namespace xchan {

inline constexpr std::uint64_t kDefaultEnumBudget = std::uint64_t{1} << 24;

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Modulation windows for the Gaussian chain. Each portion mirrors the
// deterministic packing but cedes its two most significant levels as a
// zero guard, so every u_mk stays below 1/4 in magnitude.
struct ModConstellation {
  ChannelLevels levels;
  RateAllocation rates;
  LevelWindow u11c, u11p, u12, u21, u22c, u22p;
  bool fits = false;  // all windows inside their guard-reduced capacity

  int total_bits() const { return rates.sum_rate(); }
  long double enumeration_size() const;
  bool over_budget(std::uint64_t budget = kDefaultEnumBudget) const;
};

ModConstellation build_constellation(const RateAllocation& a,
                                     const ChannelLevels& levels);

// One receiver's coefficients: direct signal, cross signal, aligned
// interference sum.
struct ReceiverCoeffs {
  double g_direct = 0;
  double g_cross = 0;
  double g_intf = 0;
};

ReceiverCoeffs receiver_coeffs(const EffectiveGains& g, int rx);

// Integer-valued symbol grids at one receiver: s_direct = 2^{n_rr} u_rr,
// s_cross = 2^{n_rc} u_cr, s_intf = the interference sumset. Sorted and
// deduplicated; exact on the dyadic grid.
struct StreamGrids {
  std::vector<std::int64_t> s_direct;
  std::vector<std::int64_t> s_cross;
  std::vector<std::int64_t> s_intf;
  std::uint64_t difference_triples() const;
};

StreamGrids build_stream_grids(const ModConstellation& c, int rx);

struct MinDistanceReport {
  bool finite = false;  // false for a singleton constellation
  long double d = 0;
  std::array<std::int64_t, 3> argmin_delta{0, 0, 0};
  std::array<std::size_t, 3> grid_sizes{0, 0, 0};
};

// Exact minimum over all distinct symbol triples of
// |g1*ds1 + g2*ds2 + g0*ds0|, by difference-set enumeration.
MinDistanceReport min_distance(const ReceiverCoeffs& g, const StreamGrids& s,
                               std::uint64_t budget = kDefaultEnumBudget);

struct SymbolTriple {
  std::int64_t s_direct = 0;
  std::int64_t s_cross = 0;
  std::int64_t s_intf = 0;
  friend bool operator==(const SymbolTriple&, const SymbolTriple&) = default;
};

// Nearest-point search over the full triple grid with a precomputed
// sorted table; ties break toward the lexicographically smallest triple.
class Demodulator {
 public:
  Demodulator(const ReceiverCoeffs& g, const StreamGrids& s,
              std::uint64_t budget = kDefaultEnumBudget);

  SymbolTriple demodulate(double y) const;
  long double value_of(const SymbolTriple& t) const;
  std::size_t constellation_points() const { return table_.size(); }
  // Smallest gap between distinct table values (0 if collisions exist).
  long double min_value_gap() const;

 private:
  struct Entry {
    long double v;
    SymbolTriple t;
  };
  ReceiverCoeffs g_;
  std::vector<Entry> table_;
};

// Largest shift between the true noiseless signal and the value the
// mismatched demodulator assumes for the same inputs, maximized over the
// constellation by brute force.
long double mismatch_offset(const ModConstellation& c, const FineGains& h,
                            const FineGains& h_hat, int rx);

struct SerEstimate {
  std::uint64_t trials = 0;
  std::uint64_t errors_rx1 = 0;
  std::uint64_t errors_rx2 = 0;
  std::uint64_t errors_any = 0;
  double rate = 0;
  double wilson_lo = 0;
  double wilson_hi = 0;
  std::uint64_t seed = 0;
};

// Uncoded Monte Carlo over uniform messages with unit receiver noise.
// The opposite private portion enters as untracked interference. With
// `mismatched`, encoders and demodulators run on a max{n_mk}-bit
// quantization of the gains while the channel uses the true ones.
SerEstimate mc_symbol_error(const FineGains& h, const ChannelLevels& levels,
                            const RateAllocation& a, std::uint64_t trials,
                            std::uint64_t seed, bool mismatched,
                            std::uint64_t budget = kDefaultEnumBudget);

struct CondEntropyEstimate {
  double bits = 0;
  bool distance_verified = false;  // min distance >= 32 at this receiver
  long double d = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

// Plug-in estimate of H(v | v_hat) at receiver one from the empirical
// joint histogram of the noiseless value and the demodulated value.
CondEntropyEstimate empirical_cond_entropy(
    const FineGains& h, const ChannelLevels& levels, const RateAllocation& a,
    std::uint64_t trials, std::uint64_t seed,
    std::uint64_t budget = kDefaultEnumBudget);

// Average pairwise union bound on the triple error probability at one
// receiver: mean over transmitted points of sum_{v' != v} Q(|v-v'| / 2).
double pairwise_union_bound(const ReceiverCoeffs& g, const StreamGrids& s,
                            std::uint64_t budget = kDefaultEnumBudget);

// Two-sided tail sum 2 * sum_{l>=1} (1/2) exp(-((d-8)/2*l - 3)^2 / 2),
// the demodulation error level guaranteed once d >= 32.
double chernoff_error_level(double d);

}  // namespace xchan

#endif  // XCHAN_GAUSS_LINK_HPP
