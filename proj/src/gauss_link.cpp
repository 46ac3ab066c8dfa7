#include "xchan/gauss_link.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "xchan/parallel.hpp"
#include "xchan/rng.hpp"
#include "xchan/stats.hpp"

namespace xchan {

namespace {

// All subset sums of 2^{n-level} over a window's levels, as exact
// integers (requires window levels <= n).
std::vector<std::int64_t> window_values(const LevelWindow& w, int n) {
  std::vector<std::int64_t> out{0};
  for (int i = 0; i < w.width; ++i) {
    int level = w.start + i;
    if (level < 1 || level > n || n - level > 62)
      throw std::domain_error("modulation window outside the dyadic grid");
    std::int64_t p = std::int64_t{1} << (n - level);
    std::size_t sz = out.size();
    out.reserve(sz * 2);
    for (std::size_t k = 0; k < sz; ++k) out.push_back(out[k] + p);
  }
  return out;
}

std::vector<std::int64_t> canon(std::vector<std::int64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<std::int64_t> merge_product(const std::vector<std::int64_t>& a,
                                        const std::vector<std::int64_t>& b) {
  std::vector<std::int64_t> out;
  out.reserve(a.size() * b.size());
  for (std::int64_t x : a)
    for (std::int64_t y : b) out.push_back(x + y);
  return canon(std::move(out));
}

std::vector<std::int64_t> difference_set(const std::vector<std::int64_t>& s) {
  std::vector<std::int64_t> out;
  out.reserve(s.size() * s.size());
  for (std::int64_t a : s)
    for (std::int64_t b : s) out.push_back(a - b);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

long double ModConstellation::enumeration_size() const {
  return std::pow(2.0L, static_cast<long double>(total_bits()));
}

bool ModConstellation::over_budget(std::uint64_t budget) const {
  return total_bits() >= 63 ||
         enumeration_size() > static_cast<long double>(budget);
}

ModConstellation build_constellation(const RateAllocation& a,
                                     const ChannelLevels& n) {
  n.validate();
  if (!n.strong_direct())
    throw std::domain_error("constellation requires strong direct links");
  ModConstellation c;
  c.levels = n;
  c.rates = a;
  // Deterministic packing shifted below a two-bit zero guard per portion;
  // private parts stay bottom-aligned.
  c.u11c = {3, a.r11c};
  c.u11p = {n.n11 - a.r11p + 1, a.r11p};
  c.u12 = {n.n22 - n.n21 + 3, a.r12};
  c.u21 = {n.n11 - n.n12 + 3, a.r21};
  c.u22c = {3, a.r22c};
  c.u22p = {n.n22 - a.r22p + 1, a.r22p};
  GaussWindowCaps cap = gauss_window_caps(n);
  c.fits = a.r11c <= cap.r11c && a.r11p <= cap.r11p && a.r12 <= cap.r12 &&
           a.r21 <= cap.r21 && a.r22c <= cap.r22c && a.r22p <= cap.r22p;
  return c;
}

ReceiverCoeffs receiver_coeffs(const EffectiveGains& g, int rx) {
  if (rx == 1) return {g.g11, g.g12, g.g10};
  if (rx == 2) return {g.g22, g.g21, g.g20};
  throw std::domain_error("rx must be 1 or 2");
}

std::uint64_t StreamGrids::difference_triples() const {
  unsigned __int128 p = 1;
  for (std::size_t n : {s_direct.size(), s_cross.size(), s_intf.size()}) {
    p *= static_cast<unsigned __int128>(n) * n;
    if (p > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(p);
}

StreamGrids build_stream_grids(const ModConstellation& c, int rx) {
  if (!c.fits)
    throw std::domain_error(
        "allocation does not fit the guarded modulation windows");
  const ChannelLevels& n = c.levels;
  StreamGrids s;
  if (rx == 1) {
    s.s_direct =
        merge_product(window_values(c.u11c, n.n11), window_values(c.u11p, n.n11));
    s.s_cross = canon(window_values(c.u12, n.n12));
    s.s_intf =
        merge_product(window_values(c.u21, n.n11), window_values(c.u22c, n.n12));
  } else if (rx == 2) {
    s.s_direct =
        merge_product(window_values(c.u22c, n.n22), window_values(c.u22p, n.n22));
    s.s_cross = canon(window_values(c.u21, n.n21));
    s.s_intf =
        merge_product(window_values(c.u12, n.n22), window_values(c.u11c, n.n21));
  } else {
    throw std::domain_error("rx must be 1 or 2");
  }
  return s;
}

MinDistanceReport min_distance(const ReceiverCoeffs& g, const StreamGrids& s,
                               std::uint64_t budget) {
  MinDistanceReport rep;
  rep.grid_sizes = {s.s_direct.size(), s.s_cross.size(), s.s_intf.size()};
  if (s.s_direct.size() * s.s_cross.size() * s.s_intf.size() <= 1) return rep;
  if (s.difference_triples() > budget)
    throw BudgetExceeded("difference enumeration exceeds budget");

  auto d1 = difference_set(s.s_direct);
  auto d2 = difference_set(s.s_cross);
  auto d0 = difference_set(s.s_intf);
  rep.finite = true;
  long double best = -1;
  for (std::int64_t a : d1) {
    long double va = (long double)g.g_direct * a;
    for (std::int64_t b : d2) {
      long double vab = va + (long double)g.g_cross * b;
      for (std::int64_t e : d0) {
        if (a == 0 && b == 0 && e == 0) continue;
        long double v = std::fabs(vab + (long double)g.g_intf * e);
        if (best < 0 || v < best) {
          best = v;
          rep.argmin_delta = {a, b, e};
        }
      }
    }
  }
  rep.d = best;
  return rep;
}

Demodulator::Demodulator(const ReceiverCoeffs& g, const StreamGrids& s,
                         std::uint64_t budget)
    : g_(g) {
  std::uint64_t points = static_cast<std::uint64_t>(s.s_direct.size()) *
                         s.s_cross.size() * s.s_intf.size();
  if (points > budget) throw BudgetExceeded("constellation exceeds budget");
  table_.reserve(points);
  for (std::int64_t a : s.s_direct)
    for (std::int64_t b : s.s_cross)
      for (std::int64_t e : s.s_intf)
        table_.push_back(Entry{(long double)g.g_direct * a +
                                   (long double)g.g_cross * b +
                                   (long double)g.g_intf * e,
                               SymbolTriple{a, b, e}});
  std::sort(table_.begin(), table_.end(), [](const Entry& x, const Entry& y) {
    if (x.v != y.v) return x.v < y.v;
    if (x.t.s_direct != y.t.s_direct) return x.t.s_direct < y.t.s_direct;
    if (x.t.s_cross != y.t.s_cross) return x.t.s_cross < y.t.s_cross;
    return x.t.s_intf < y.t.s_intf;
  });
}

long double Demodulator::value_of(const SymbolTriple& t) const {
  return (long double)g_.g_direct * t.s_direct +
         (long double)g_.g_cross * t.s_cross + (long double)g_.g_intf * t.s_intf;
}

long double Demodulator::min_value_gap() const {
  long double gap = -1;
  for (std::size_t i = 1; i < table_.size(); ++i) {
    long double d = table_[i].v - table_[i - 1].v;
    if (gap < 0 || d < gap) gap = d;
  }
  return gap < 0 ? 0 : gap;
}

SymbolTriple Demodulator::demodulate(double y) const {
  auto it = std::lower_bound(
      table_.begin(), table_.end(), (long double)y,
      [](const Entry& e, long double v) { return e.v < v; });
  const Entry* best = nullptr;
  long double best_d = 0;
  auto consider = [&](const Entry& e) {
    long double d = std::fabs((long double)y - e.v);
    if (!best || d < best_d) {
      best = &e;
      best_d = d;
      return;
    }
    if (d == best_d) {
      const SymbolTriple& a = e.t;
      const SymbolTriple& b = best->t;
      if (std::tie(a.s_direct, a.s_cross, a.s_intf) <
          std::tie(b.s_direct, b.s_cross, b.s_intf))
        best = &e;
    }
  };
  // Equal values are adjacent after sorting; scan the nearest runs on
  // both sides of the insertion point.
  for (auto it2 = it; it2 != table_.end(); ++it2) {
    if (best && it2->v - (long double)y > best_d) break;
    consider(*it2);
  }
  for (auto it2 = it; it2 != table_.begin();) {
    --it2;
    if (best && (long double)y - it2->v > best_d) break;
    consider(*it2);
  }
  return best->t;
}

long double mismatch_offset(const ModConstellation& c, const FineGains& h,
                            const FineGains& h_hat, int rx) {
  if (!c.fits)
    throw std::domain_error(
        "allocation does not fit the guarded modulation windows");
  const ChannelLevels& n = c.levels;
  // Offset terms at rx1: (h11-h'11) on the u11 and u21 paths, (h12-h'12)
  // on the u12 and u22_common paths; rx2 by symmetry.
  struct Term {
    double coeff;
    std::vector<double> u_values;
  };
  auto u_grid = [](const LevelWindow& w) {
    std::vector<double> vals{0.0};
    for (int i = 0; i < w.width; ++i) {
      double p = std::ldexp(1.0, -(w.start + i));
      std::size_t sz = vals.size();
      for (std::size_t k = 0; k < sz; ++k) vals.push_back(vals[k] + p);
    }
    return vals;
  };
  auto u_grid2 = [&](const LevelWindow& a, const LevelWindow& b) {
    std::vector<double> va = u_grid(a), vb = u_grid(b), out;
    out.reserve(va.size() * vb.size());
    for (double x : va)
      for (double y : vb) out.push_back(x + y);
    return out;
  };

  std::vector<Term> terms;
  if (rx == 1) {
    double e1 = h.h11 - h_hat.h11;
    double e2 = h.h12 - h_hat.h12;
    terms.push_back({h_hat.h22 * std::ldexp(e1, n.n11), u_grid2(c.u11c, c.u11p)});
    terms.push_back({h_hat.h21 * std::ldexp(e2, n.n12), u_grid(c.u12)});
    terms.push_back({h_hat.h12 * std::ldexp(e1, n.n11), u_grid(c.u21)});
    terms.push_back({h_hat.h11 * std::ldexp(e2, n.n12), u_grid(c.u22c)});
  } else if (rx == 2) {
    double e1 = h.h21 - h_hat.h21;
    double e2 = h.h22 - h_hat.h22;
    terms.push_back({h_hat.h11 * std::ldexp(e2, n.n22), u_grid2(c.u22c, c.u22p)});
    terms.push_back({h_hat.h12 * std::ldexp(e1, n.n21), u_grid(c.u21)});
    terms.push_back({h_hat.h21 * std::ldexp(e2, n.n22), u_grid(c.u12)});
    terms.push_back({h_hat.h22 * std::ldexp(e1, n.n21), u_grid(c.u11c)});
  } else {
    throw std::domain_error("rx must be 1 or 2");
  }

  std::vector<long double> sums{0.0L};
  for (const Term& t : terms) {
    std::vector<long double> next;
    next.reserve(sums.size() * t.u_values.size());
    for (long double s : sums)
      for (double u : t.u_values) next.push_back(s + (long double)t.coeff * u);
    sums = std::move(next);
  }
  long double best = 0;
  for (long double s : sums) best = std::max(best, std::fabs(s));
  return best;
}

namespace {

struct TxSample {
  double u11, u12, u21, u22c, u22p;
  SymbolTriple t1, t2;
};

struct ChainSetup {
  ModConstellation c;
  StreamGrids s1, s2;
  // Windows turned into flat bit lists for drawing uniform messages.
  std::vector<int> lv_u11, lv_u12, lv_u21, lv_u22c, lv_u22p;
};

std::vector<int> window_levels(const LevelWindow& w) {
  std::vector<int> out;
  for (int i = 0; i < w.width; ++i) out.push_back(w.start + i);
  return out;
}

ChainSetup make_chain(const RateAllocation& a, const ChannelLevels& n) {
  ChainSetup ch;
  ch.c = build_constellation(a, n);
  if (!ch.c.fits)
    throw std::domain_error(
        "allocation does not fit the guarded modulation windows");
  ch.s1 = build_stream_grids(ch.c, 1);
  ch.s2 = build_stream_grids(ch.c, 2);
  ch.lv_u11 = window_levels(ch.c.u11c);
  for (int l : window_levels(ch.c.u11p)) ch.lv_u11.push_back(l);
  ch.lv_u12 = window_levels(ch.c.u12);
  ch.lv_u21 = window_levels(ch.c.u21);
  ch.lv_u22c = window_levels(ch.c.u22c);
  ch.lv_u22p = window_levels(ch.c.u22p);
  return ch;
}

// Draws uniform bits over a window, accumulating the real input value
// and its exact integer images at the two receiver scales.
struct DrawnPortion {
  double u = 0;
  std::int64_t scaled_a = 0;  // sum of 2^{na - level}
  std::int64_t scaled_b = 0;  // sum of 2^{nb - level}
};

DrawnPortion draw_portion(RngStream& rng, const std::vector<int>& levels,
                          int na, int nb) {
  DrawnPortion p;
  for (int l : levels) {
    if (rng.next_u64() & 1u) {
      p.u += std::ldexp(1.0, -l);
      p.scaled_a += std::int64_t{1} << (na - l);
      if (nb >= l) p.scaled_b += std::int64_t{1} << (nb - l);
    }
  }
  return p;
}

TxSample draw_message(RngStream& rng, const ChainSetup& ch,
                      const ChannelLevels& n) {
  DrawnPortion u11 = draw_portion(rng, ch.lv_u11, n.n11, n.n21);
  DrawnPortion u12 = draw_portion(rng, ch.lv_u12, n.n22, n.n12);
  DrawnPortion u21 = draw_portion(rng, ch.lv_u21, n.n11, n.n21);
  DrawnPortion u22c = draw_portion(rng, ch.lv_u22c, n.n22, n.n12);
  DrawnPortion u22p = draw_portion(rng, ch.lv_u22p, n.n22, n.n12);
  TxSample tx;
  tx.u11 = u11.u;
  tx.u12 = u12.u;
  tx.u21 = u21.u;
  tx.u22c = u22c.u;
  tx.u22p = u22p.u;
  tx.t1 = {u11.scaled_a, u12.scaled_b, u21.scaled_a + u22c.scaled_b};
  tx.t2 = {u22c.scaled_a + u22p.scaled_a, u21.scaled_b,
           u12.scaled_a + u11.scaled_b};
  return tx;
}

}  // namespace

SerEstimate mc_symbol_error(const FineGains& h, const ChannelLevels& n,
                            const RateAllocation& a, std::uint64_t trials,
                            std::uint64_t seed, bool mismatched,
                            std::uint64_t budget) {
  h.validate();
  ChainSetup ch = make_chain(a, n);
  FineGains henc = mismatched ? quantize_gains(h, std::max(1, n.max_level())) : h;
  EffectiveGains gdem = effective_gains(henc);
  Demodulator dem1(receiver_coeffs(gdem, 1), ch.s1, budget);
  Demodulator dem2(receiver_coeffs(gdem, 2), ch.s2, budget);

  std::atomic<std::uint64_t> e1{0}, e2{0}, ea{0};
  parallel_for(0, trials, [&](std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t c1 = 0, c2 = 0, ca = 0;
    for (std::uint64_t i = lo; i < hi; ++i) {
      RngStream rng(seed, i);
      TxSample tx = draw_message(rng, ch, n);
      auto [x1, x2] =
          modulate_inputs(henc, tx.u11, tx.u12, tx.u21, tx.u22c + tx.u22p);
      double z1 = rng.next_gauss();
      double z2 = rng.next_gauss();
      auto [y1, y2] = gauss_channel_apply(h, n, x1, x2, z1, z2);
      bool bad1 = !(dem1.demodulate(y1) == tx.t1);
      bool bad2 = !(dem2.demodulate(y2) == tx.t2);
      c1 += bad1;
      c2 += bad2;
      ca += bad1 || bad2;
    }
    e1 += c1;
    e2 += c2;
    ea += ca;
  });

  SerEstimate out;
  out.trials = trials;
  out.errors_rx1 = e1;
  out.errors_rx2 = e2;
  out.errors_any = ea;
  out.rate = trials ? double(out.errors_any) / double(trials) : 0.0;
  auto [lo, hi] = wilson95(out.errors_any, trials);
  out.wilson_lo = lo;
  out.wilson_hi = hi;
  out.seed = seed;
  return out;
}

CondEntropyEstimate empirical_cond_entropy(const FineGains& h,
                                           const ChannelLevels& n,
                                           const RateAllocation& a,
                                           std::uint64_t trials,
                                           std::uint64_t seed,
                                           std::uint64_t budget) {
  h.validate();
  ChainSetup ch = make_chain(a, n);
  EffectiveGains g = effective_gains(h);
  ReceiverCoeffs g1 = receiver_coeffs(g, 1);
  Demodulator dem(g1, ch.s1, budget);
  MinDistanceReport mdr = min_distance(g1, ch.s1, budget);

  // Joint histogram over (transmitted triple, demodulated triple),
  // triples keyed by their exact symbol values.
  using Key = std::array<std::int64_t, 6>;
  std::map<Key, std::uint64_t> joint;
  std::mutex mu;
  parallel_for(0, trials, [&](std::uint64_t lo, std::uint64_t hi) {
    std::map<Key, std::uint64_t> local;
    for (std::uint64_t i = lo; i < hi; ++i) {
      RngStream rng(seed, i);
      TxSample tx = draw_message(rng, ch, n);
      auto [x1, x2] =
          modulate_inputs(h, tx.u11, tx.u12, tx.u21, tx.u22c + tx.u22p);
      double z1 = rng.next_gauss();
      double z2 = rng.next_gauss();
      auto [y1, y2] = gauss_channel_apply(h, n, x1, x2, z1, z2);
      (void)y2;
      SymbolTriple est = dem.demodulate(y1);
      local[{tx.t1.s_direct, tx.t1.s_cross, tx.t1.s_intf, est.s_direct,
             est.s_cross, est.s_intf}]++;
    }
    std::lock_guard<std::mutex> lock(mu);
    for (auto& [k, v] : local) joint[k] += v;
  });

  // H(v | v_hat) = sum over v_hat of p(v_hat) H(v | v_hat = q).
  std::map<std::array<std::int64_t, 3>, std::uint64_t> by_est;
  for (auto& [k, cnt] : joint) by_est[{k[3], k[4], k[5]}] += cnt;
  double hbits = 0;
  for (auto& [est, total] : by_est) {
    double hq = 0;
    for (auto& [k, cnt] : joint) {
      if (k[3] != est[0] || k[4] != est[1] || k[5] != est[2]) continue;
      double p = double(cnt) / double(total);
      hq -= p * std::log2(p);
    }
    hbits += (double(total) / double(trials)) * hq;
  }

  CondEntropyEstimate out;
  out.bits = hbits;
  out.d = mdr.finite ? mdr.d : 0;
  out.distance_verified = !mdr.finite || mdr.d >= 32.0L;
  out.trials = trials;
  out.seed = seed;
  return out;
}

double pairwise_union_bound(const ReceiverCoeffs& g, const StreamGrids& s,
                            std::uint64_t budget) {
  Demodulator dem(g, s, budget);
  std::size_t m = dem.constellation_points();
  if (m <= 1) return 0;
  // Recover the sorted value list through demodulation-free access:
  // rebuild values directly.
  std::vector<long double> vals;
  vals.reserve(m);
  for (std::int64_t a : s.s_direct)
    for (std::int64_t b : s.s_cross)
      for (std::int64_t e : s.s_intf)
        vals.push_back((long double)g.g_direct * a + (long double)g.g_cross * b +
                       (long double)g.g_intf * e);
  double total = 0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    double row = 0;
    for (std::size_t j = 0; j < vals.size(); ++j) {
      if (i == j) continue;
      row += gaussian_q(double(std::fabs(vals[i] - vals[j])) / 2.0);
    }
    total += row;
  }
  return total / double(vals.size());
}

double chernoff_error_level(double d) {
  double step = (d - 8.0) / 2.0;
  double total = 0;
  for (int l = 1; l <= 64; ++l) {
    double arg = step * l - 3.0;
    if (arg < 0) arg = 0;
    double term = std::exp(-arg * arg / 2.0);
    total += term;
    if (term < 1e-300) break;
  }
  return total;  // 2 * sum of (1/2) exp(...)
}

}  // namespace xchan
