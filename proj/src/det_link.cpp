#include "xchan/det_link.hpp"

#include <stdexcept>

namespace xchan {

namespace {

void check_window(const LevelWindow& w, int vec_len, const char* name) {
  if (w.width < 0 || (w.width > 0 && (w.start < 1 || w.start + w.width - 1 > vec_len)))
    throw std::domain_error(std::string("allocation does not fit ") + name);
}

void write_window(gf2::BitVec& dst, const LevelWindow& w,
                  const gf2::BitVec& payload) {
  if (payload.len() != w.width)
    throw std::invalid_argument("message length does not match its rate");
  for (int i = 1; i <= w.width; ++i)
    if (payload.get(i)) dst.set(w.start + i - 1, true);
}

gf2::BitVec read_window(const gf2::BitVec& src, const LevelWindow& w) {
  gf2::BitVec out(w.width);
  for (int i = 1; i <= w.width; ++i)
    if (src.get(w.start + i - 1)) out.set(i, true);
  return out;
}

}  // namespace

DetLayout det_layout(const RateAllocation& a, const ChannelLevels& n) {
  n.validate();
  if (!n.strong_direct())
    throw std::domain_error("layout requires strong direct links");
  DetLayout l;
  l.u11c = {1, a.r11c};
  l.u11p = {n.n11 - a.r11p + 1, a.r11p};
  l.u12 = {n.n22 - n.n21 + 1, a.r12};
  l.u21 = {n.n11 - n.n12 + 1, a.r21};
  l.u22c = {1, a.r22c};
  l.u22p = {n.n22 - a.r22p + 1, a.r22p};
  check_window(l.u11c, n.n11, "u11 common window");
  check_window(l.u11p, n.n11, "u11 private window");
  check_window(l.u12, n.n22, "u12 window");
  check_window(l.u21, n.n11, "u21 window");
  check_window(l.u22c, n.n22, "u22 common window");
  check_window(l.u22p, n.n22, "u22 private window");
  // common and private portions may not collide
  if (a.r11c + a.r11p > n.n11 || a.r11c > n.n21)
    throw std::domain_error("u11 windows overlap");
  if (a.r22c + a.r22p > n.n22 || a.r22c > n.n12)
    throw std::domain_error("u22 windows overlap");
  return l;
}

DetInputs pack_inputs(const DetMessages& msgs, const RateAllocation& a,
                      const ChannelLevels& n) {
  DetLayout l = det_layout(a, n);
  DetInputs in{gf2::BitVec(n.n11), gf2::BitVec(n.n22), gf2::BitVec(n.n11),
               gf2::BitVec(n.n22)};
  write_window(in.u11, l.u11c, msgs.m11c);
  write_window(in.u11, l.u11p, msgs.m11p);
  write_window(in.u12, l.u12, msgs.m12);
  write_window(in.u21, l.u21, msgs.m21);
  write_window(in.u22, l.u22c, msgs.m22c);
  write_window(in.u22, l.u22p, msgs.m22p);
  return in;
}

DetMessages unpack_inputs(const DetInputs& in, const RateAllocation& a,
                          const ChannelLevels& n) {
  DetLayout l = det_layout(a, n);
  DetMessages m;
  m.m11c = read_window(in.u11, l.u11c);
  m.m11p = read_window(in.u11, l.u11p);
  m.m12 = read_window(in.u12, l.u12);
  m.m21 = read_window(in.u21, l.u21);
  m.m22c = read_window(in.u22, l.u22c);
  m.m22p = read_window(in.u22, l.u22p);
  return m;
}

std::optional<DecoderSystem> build_decoder_system(const gf2::BitVec& y,
                                                  const DetChannelGains& g,
                                                  const RateAllocation& a,
                                                  const ChannelLevels& n,
                                                  int rx) {
  DetLayout l = det_layout(a, n);
  if (rx != 1 && rx != 2) throw std::domain_error("rx must be 1 or 2");

  const int dim = rx == 1 ? n.n11 : n.n22;
  if (y.len() != dim) throw std::invalid_argument("received vector length");
  if (dim == 0) {
    DecoderSystem empty;
    empty.sys.rhs = y;
    return empty;
  }

  // Column positions as seen at this receiver. Cross-link inputs arrive
  // shifted down by the zero pad of the opposite transmitter's vector;
  // an information window must stay within the visible common part.
  LevelWindow direct_c = rx == 1 ? l.u11c : l.u22c;
  LevelWindow direct_p = rx == 1 ? l.u11p : l.u22p;
  LevelWindow cross_src = rx == 1 ? l.u12 : l.u21;
  const int cross_common = rx == 1 ? n.n12 : n.n21;
  const int cross_pad = dim - cross_common;
  const int n_intf = rx == 1 ? std::max(a.r21, a.r22c) : std::max(a.r12, a.r11c);
  const int intf_start = rx == 1 ? (n.n11 - n.n12 + 1) : (n.n22 - n.n21 + 1);

  if (cross_src.width > 0 &&
      cross_src.start + cross_src.width - 1 > cross_common)
    return std::nullopt;  // cross message not visible here
  if (n_intf > 0 && intf_start + n_intf - 1 > dim) return std::nullopt;

  double gd = rx == 1 ? g.g11 : g.g22;
  double gc = rx == 1 ? g.g12 : g.g21;
  double gi = rx == 1 ? g.g10 : g.g20;
  auto md = gf2::toeplitz_from_gain(gd, dim);
  auto mc = gf2::toeplitz_from_gain(gc, dim);
  auto mi = gf2::toeplitz_from_gain(gi, dim);

  auto column_of = [](const gf2::LowerToeplitzGF2& m, int j) {
    return m.first_column.shifted_down(j - 1);
  };

  DecoderSystem d;
  d.n_direct_common = direct_c.width;
  d.n_direct_private = direct_p.width;
  d.n_cross = cross_src.width;
  d.n_interference = n_intf;
  d.sys.rhs = y;
  for (int i = 0; i < direct_c.width; ++i)
    d.sys.columns.push_back(column_of(md, direct_c.start + i));
  for (int i = 0; i < direct_p.width; ++i)
    d.sys.columns.push_back(column_of(md, direct_p.start + i));
  for (int i = 0; i < cross_src.width; ++i)
    d.sys.columns.push_back(column_of(mc, cross_pad + cross_src.start + i));
  for (int i = 0; i < n_intf; ++i)
    d.sys.columns.push_back(column_of(mi, intf_start + i));
  return d;
}

DecodeOutcome decode_receiver(const gf2::BitVec& y, const DetChannelGains& g,
                              const RateAllocation& a, const ChannelLevels& n,
                              int rx) {
  DecodeOutcome out;
  auto built = build_decoder_system(y, g, a, n, rx);
  if (!built) return out;
  const DecoderSystem& d = *built;

  auto solved = gf2::solve_unique(d.sys);
  if (solved.status != gf2::SolveStatus::kUnique) return out;

  auto slice = [&](int offset, int width) {
    gf2::BitVec v(width);
    for (int i = 1; i <= width; ++i)
      if (solved.coeffs.get(offset + i)) v.set(i, true);
    return v;
  };
  out.ok = true;
  out.direct_common = slice(0, d.n_direct_common);
  out.direct_private = slice(d.n_direct_common, d.n_direct_private);
  out.cross = slice(d.n_direct_common + d.n_direct_private, d.n_cross);
  return out;
}

bool roundtrip_ok(const DetMessages& msgs, const RateAllocation& a,
                  const ChannelLevels& n, const DetChannelGains& g) {
  DetInputs in = pack_inputs(msgs, a, n);
  auto [y1, y2] = det_channel_apply(g, in, n);
  DecodeOutcome r1 = decode_receiver(y1, g, a, n, 1);
  DecodeOutcome r2 = decode_receiver(y2, g, a, n, 2);
  if (!r1.ok || !r2.ok) return false;
  return r1.direct_common == msgs.m11c && r1.direct_private == msgs.m11p &&
         r1.cross == msgs.m12 && r2.direct_common == msgs.m22c &&
         r2.direct_private == msgs.m22p && r2.cross == msgs.m21;
}

}  // namespace xchan
