#include "xchan/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace xchan {

namespace {
void require_unit_range(double h, const char* name) {
  if (!(h > 1.0) || !(h <= 2.0))
    throw std::domain_error(std::string(name) + " must lie in (1,2]");
}
}  // namespace

void ChannelLevels::validate() const {
  if (n11 < 0 || n12 < 0 || n21 < 0 || n22 < 0)
    throw std::domain_error("gain exponents must be nonnegative");
}

void FineGains::validate() const {
  require_unit_range(h11, "h11");
  require_unit_range(h12, "h12");
  require_unit_range(h21, "h21");
  require_unit_range(h22, "h22");
}

void DetChannelGains::validate() const {
  require_unit_range(g10, "g10");
  require_unit_range(g11, "g11");
  require_unit_range(g12, "g12");
  require_unit_range(g20, "g20");
  require_unit_range(g21, "g21");
  require_unit_range(g22, "g22");
}

EffectiveGains effective_gains(const FineGains& h) {
  h.validate();
  EffectiveGains g;
  g.g10 = h.h11 * h.h12;
  g.g11 = h.h11 * h.h22;
  g.g12 = h.h12 * h.h21;
  g.g20 = h.h22 * h.h21;
  g.g21 = h.h21 * h.h12;
  g.g22 = h.h22 * h.h11;
  return g;
}

FineGains quantize_gains(const FineGains& h, int bits) {
  if (bits < 1) throw std::domain_error("quantizer needs at least one bit");
  h.validate();
  auto q = [bits](double v) {
    double scale = std::ldexp(1.0, bits);
    double idx = std::floor((v - 1.0) * scale);
    if (idx < 1.0) idx = 1.0;  // keep the result strictly above 1
    return 1.0 + idx / scale;
  };
  return FineGains{q(h.h11), q(h.h12), q(h.h21), q(h.h22)};
}

std::pair<double, double> modulate_inputs(const FineGains& hq, double u11,
                                          double u12, double u21, double u22) {
  hq.validate();
  for (double u : {u11, u12, u21, u22})
    if (std::fabs(u) > 0.25)
      throw std::domain_error("modulator input exceeds 1/4");
  return {hq.h22 * u11 + hq.h12 * u21, hq.h11 * u22 + hq.h21 * u12};
}

std::pair<double, double> gauss_channel_apply(const FineGains& h,
                                              const ChannelLevels& levels,
                                              double x1, double x2, double z1,
                                              double z2) {
  levels.validate();
  double y1 = std::ldexp(h.h11 * x1, levels.n11) +
              std::ldexp(h.h12 * x2, levels.n12) + z1;
  double y2 = std::ldexp(h.h21 * x1, levels.n21) +
              std::ldexp(h.h22 * x2, levels.n22) + z2;
  return {y1, y2};
}

std::pair<gf2::BitVec, gf2::BitVec> det_channel_apply(
    const DetChannelGains& g, const DetInputs& in,
    const ChannelLevels& levels) {
  levels.validate();
  g.validate();
  if (!levels.strong_direct())
    throw std::domain_error("det_channel_apply requires strong direct links");
  if (in.u11.len() != levels.n11 || in.u21.len() != levels.n11 ||
      in.u12.len() != levels.n22 || in.u22.len() != levels.n22)
    throw std::invalid_argument("det input length mismatch");

  const int n11 = levels.n11;
  const int n22 = levels.n22;

  gf2::BitVec y1(n11), y2(n22);
  if (n11 > 0) {
    auto g11 = gf2::toeplitz_from_gain(g.g11, n11);
    auto g12 = gf2::toeplitz_from_gain(g.g12, n11);
    auto g10 = gf2::toeplitz_from_gain(g.g10, n11);
    gf2::BitVec cross = in.u12.prefix(levels.n12).embed_bottom(n11);
    gf2::BitVec intf =
        in.u21 ^ in.u22.prefix(levels.n12).embed_bottom(n11);
    y1 = matvec(g11, in.u11) ^ matvec(g12, cross) ^ matvec(g10, intf);
  }
  if (n22 > 0) {
    auto g22 = gf2::toeplitz_from_gain(g.g22, n22);
    auto g21 = gf2::toeplitz_from_gain(g.g21, n22);
    auto g20 = gf2::toeplitz_from_gain(g.g20, n22);
    gf2::BitVec cross = in.u21.prefix(levels.n21).embed_bottom(n22);
    gf2::BitVec intf =
        in.u12 ^ in.u11.prefix(levels.n21).embed_bottom(n22);
    y2 = matvec(g22, in.u22) ^ matvec(g21, cross) ^ matvec(g20, intf);
  }
  return {y1, y2};
}

}  // namespace xchan
