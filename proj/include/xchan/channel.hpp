#ifndef XCHAN_CHANNEL_HPP
#define XCHAN_CHANNEL_HPP

#include <utility>

#include "xchan/bitvec.hpp"

namespace xchan {

// Integer gain exponents; the link from transmitter k to receiver m has
// gain 2^{n_mk} h_mk, so the per-link SNR is about 2^{2 n_mk}.
struct ChannelLevels {
  int n11 = 0;
  int n12 = 0;
  int n21 = 0;
  int n22 = 0;

  // Direct links at least as strong as the cross links; required by the
  // allocation and bound machinery.
  bool strong_direct() const {
    return std::min(n11, n22) >= std::max(n12, n21);
  }
  int max_level() const {
    return std::max(std::max(n11, n12), std::max(n21, n22));
  }
  void validate() const;
  friend bool operator==(const ChannelLevels&, const ChannelLevels&) = default;
};

// Fine-structure gains, each in (1,2].
struct FineGains {
  double h11 = 1.5;
  double h12 = 1.5;
  double h21 = 1.5;
  double h22 = 1.5;
  void validate() const;
};

// Products of fine gains induced by the pre-multiplication at the
// transmitters; g_m0 is the coefficient shared by both interference
// terms at receiver m. Each lies in (1,4].
struct EffectiveGains {
  double g10 = 0, g11 = 0, g12 = 0;
  double g20 = 0, g21 = 0, g22 = 0;
};

EffectiveGains effective_gains(const FineGains& h);

// Gains of the deterministic pipeline, sampled directly on (1,2]^{2x3}.
struct DetChannelGains {
  double g10 = 1.5, g11 = 1.5, g12 = 1.5;
  double g20 = 1.5, g21 = 1.5, g22 = 1.5;
  void validate() const;
};

// Keeps the first `bits` fractional binary digits of each gain (floor),
// clamped into (1,2]; |h - h_hat| <= 2^-bits.
FineGains quantize_gains(const FineGains& h, int bits);

// x1 = hq22*u11 + hq12*u21, x2 = hq11*u22 + hq21*u12.
// Requires |u| <= 1/4 so that |x| <= 1.
std::pair<double, double> modulate_inputs(const FineGains& hq, double u11,
                                          double u12, double u21, double u22);

// y_m = 2^{n_m1} h_m1 x1 + 2^{n_m2} h_m2 x2 + z_m.
std::pair<double, double> gauss_channel_apply(const FineGains& h,
                                              const ChannelLevels& levels,
                                              double x1, double x2, double z1,
                                              double z2);

// Channel inputs of the deterministic model. u11/u21 have length n11 with
// the common part in the first n21 levels; u12/u22 have length n22 with
// the common part in the first n12 levels.
struct DetInputs {
  gf2::BitVec u11, u12, u21, u22;
};

// Forward map of the deterministic network. At receiver one:
//   y1 = G11*u11 + G12*(0;u12_c) + G10*(u21 + (0;u22_c))
// with all matrices built from the receiver's gain triple at dimension
// n11; receiver two is symmetric at dimension n22.
std::pair<gf2::BitVec, gf2::BitVec> det_channel_apply(
    const DetChannelGains& g, const DetInputs& in, const ChannelLevels& levels);

}  // namespace xchan

#endif  // XCHAN_CHANNEL_HPP
