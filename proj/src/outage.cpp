#include "xchan/outage.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "xchan/parallel.hpp"
#include "xchan/rng.hpp"
#include "xchan/stats.hpp"

namespace xchan {

namespace {

OutageEstimate finish(std::uint64_t samples, std::uint64_t failures,
                      std::uint64_t seed) {
  OutageEstimate out;
  out.samples = samples;
  out.failures = failures;
  out.estimate = samples ? double(failures) / double(samples) : 0.0;
  auto [lo, hi] = wilson95(failures, samples);
  out.wilson_lo = lo;
  out.wilson_hi = hi;
  out.seed = seed;
  return out;
}

DetChannelGains draw_det_gains(RngStream& rng) {
  DetChannelGains g;
  g.g10 = rng.next_open_closed(1.0, 2.0);
  g.g11 = rng.next_open_closed(1.0, 2.0);
  g.g12 = rng.next_open_closed(1.0, 2.0);
  g.g20 = rng.next_open_closed(1.0, 2.0);
  g.g21 = rng.next_open_closed(1.0, 2.0);
  g.g22 = rng.next_open_closed(1.0, 2.0);
  return g;
}

FineGains draw_fine_gains(RngStream& rng) {
  FineGains h;
  h.h11 = rng.next_open_closed(1.0, 2.0);
  h.h12 = rng.next_open_closed(1.0, 2.0);
  h.h21 = rng.next_open_closed(1.0, 2.0);
  h.h22 = rng.next_open_closed(1.0, 2.0);
  return h;
}

bool det_sample_fails(const ChannelLevels& n, const RateAllocation& a,
                      const DetChannelGains& g) {
  // Alignment failure depends only on the column sets, not the payload.
  gf2::BitVec y1(n.n11), y2(n.n22);
  auto d1 = build_decoder_system(y1, g, a, n, 1);
  auto d2 = build_decoder_system(y2, g, a, n, 2);
  if (!d1 || !d2) return true;
  if (gf2::rank(d1->sys.columns) != static_cast<int>(d1->sys.columns.size()))
    return true;
  if (gf2::rank(d2->sys.columns) != static_cast<int>(d2->sys.columns.size()))
    return true;
  return false;
}

bool gauss_sample_fails(const StreamGrids& s1, const StreamGrids& s2,
                        const FineGains& h, double threshold,
                        std::uint64_t budget) {
  EffectiveGains g = effective_gains(h);
  MinDistanceReport m1 = min_distance(receiver_coeffs(g, 1), s1, budget);
  if (m1.finite && m1.d < (long double)threshold) return true;
  MinDistanceReport m2 = min_distance(receiver_coeffs(g, 2), s2, budget);
  return m2.finite && m2.d < (long double)threshold;
}

}  // namespace

OutageEstimate mc_outage_det(const ChannelLevels& n, const RateAllocation& a,
                             std::uint64_t samples, std::uint64_t seed) {
  n.validate();
  std::atomic<std::uint64_t> failures{0};
  parallel_for(0, samples, [&](std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t local = 0;
    for (std::uint64_t i = lo; i < hi; ++i) {
      RngStream rng(seed, i);
      local += det_sample_fails(n, a, draw_det_gains(rng));
    }
    failures += local;
  });
  return finish(samples, failures, seed);
}

bool replay_outage_det(const ChannelLevels& n, const RateAllocation& a,
                       std::uint64_t seed, std::uint64_t index) {
  RngStream rng(seed, index);
  return det_sample_fails(n, a, draw_det_gains(rng));
}

OutageEstimate mc_outage_gauss(const ChannelLevels& n, const RateAllocation& a,
                               std::uint64_t samples, std::uint64_t seed,
                               double threshold, std::uint64_t budget) {
  ModConstellation c = build_constellation(a, n);
  StreamGrids s1 = build_stream_grids(c, 1);
  StreamGrids s2 = build_stream_grids(c, 2);
  if (s1.difference_triples() > budget || s2.difference_triples() > budget)
    throw BudgetExceeded("difference enumeration exceeds budget");

  std::atomic<std::uint64_t> failures{0};
  parallel_for(0, samples, [&](std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t local = 0;
    for (std::uint64_t i = lo; i < hi; ++i) {
      RngStream rng(seed, i);
      local += gauss_sample_fails(s1, s2, draw_fine_gains(rng), threshold,
                                  budget);
    }
    failures += local;
  });
  return finish(samples, failures, seed);
}

bool replay_outage_gauss(const ChannelLevels& n, const RateAllocation& a,
                         std::uint64_t seed, std::uint64_t index,
                         double threshold, std::uint64_t budget) {
  ModConstellation c = build_constellation(a, n);
  StreamGrids s1 = build_stream_grids(c, 1);
  StreamGrids s2 = build_stream_grids(c, 2);
  RngStream rng(seed, index);
  return gauss_sample_fails(s1, s2, draw_fine_gains(rng), threshold, budget);
}

void GroshevParams::validate() const {
  if (!(beta > 0.0) || beta > 1.0)
    throw std::domain_error("beta must lie in (0,1]");
  if (a1 < 1 || a2 < 1)
    throw std::domain_error("coefficients a1, a2 must be positive integers");
  if (q0 < 0 || q1 < 0 || q2 < 0)
    throw std::domain_error("box radii must be nonnegative integers");
}

double GroshevParams::q1_tilde() const {
  double lim = 8.0 * double(std::max(q0, a2 * q2)) / double(a1);
  return std::min(double(q1), lim);
}

double GroshevParams::q2_tilde() const {
  double lim = 8.0 * double(std::max(q0, a1 * q1)) / double(a2);
  return std::min(double(q2), lim);
}

double groshev_bound(const GroshevParams& p) {
  p.validate();
  const double qt1 = p.q1_tilde();
  const double qt2 = p.q2_tilde();
  const double a1 = double(p.a1), a2 = double(p.a2);
  const double q0 = double(p.q0), q1 = double(p.q1), q2 = double(p.q2);
  double term1 = 2.0 * std::min(q2, q0 / a2);
  double term2 = std::min({q1 * qt2, q0 * qt2 / a1, a2 * qt2 * qt2 / a1});
  double term3 = 2.0 * std::min(q1, q0 / a1);
  double term4 = std::min({q2 * qt1, q0 * qt1 / a2, a1 * qt1 * qt1 / a2});
  return 504.0 * p.beta * (term1 + term2 + term3 + term4);
}

namespace {

bool groshev_sample_fails(const GroshevParams& p, RngStream& rng) {
  double g0 = rng.next_open_closed(1.0, 4.0);
  double g1 = rng.next_open_closed(1.0, 4.0);
  double g2 = rng.next_open_closed(1.0, 4.0);
  // Exact enumeration of the integer box; (q0,q1,q2) and its negation
  // give the same magnitude, so scan q0 >= 0 with care at q0 == 0.
  for (std::int64_t i0 = 0; i0 <= p.q0; ++i0) {
    for (std::int64_t i1 = -p.q1; i1 <= p.q1; ++i1) {
      for (std::int64_t i2 = -p.q2; i2 <= p.q2; ++i2) {
        if (i0 == 0 && i1 == 0 && i2 == 0) continue;
        if (i0 == 0 && (i1 < 0 || (i1 == 0 && i2 < 0))) continue;
        double v = g0 * double(i0) + double(p.a1) * g1 * double(i1) +
                   double(p.a2) * g2 * double(i2);
        if (std::fabs(v) < p.beta) return true;
      }
    }
  }
  return false;
}

}  // namespace

OutageEstimate mc_groshev_measure(const GroshevParams& p,
                                  std::uint64_t samples, std::uint64_t seed,
                                  std::uint64_t box_budget) {
  p.validate();
  std::uint64_t box = std::uint64_t(p.q0 + 1) * std::uint64_t(2 * p.q1 + 1) *
                      std::uint64_t(2 * p.q2 + 1);
  if (box > box_budget)
    throw BudgetExceeded("integer box exceeds enumeration budget");

  std::atomic<std::uint64_t> failures{0};
  parallel_for(0, samples, [&](std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t local = 0;
    for (std::uint64_t i = lo; i < hi; ++i) {
      RngStream rng(seed, i);
      local += groshev_sample_fails(p, rng);
    }
    failures += local;
  });
  return finish(samples, failures, seed);
}

bool replay_groshev(const GroshevParams& p, std::uint64_t seed,
                    std::uint64_t index) {
  RngStream rng(seed, index);
  return groshev_sample_fails(p, rng);
}

bool mac_cell_black(double h1, double h2, int n, int q1_levels, int q2_levels) {
  // Differences u1-u1' run over a/q1_levels, a in [-(q1-1), q1-1]; the
  // outage condition 2^n |h1 du1 + h2 du2| <= 2 is checked exactly.
  const double thr = std::ldexp(2.0, -n);
  for (int a = -(q1_levels - 1); a <= q1_levels - 1; ++a) {
    for (int b = -(q2_levels - 1); b <= q2_levels - 1; ++b) {
      if (a == 0 && b == 0) continue;
      double v = h1 * double(a) / double(q1_levels) +
                 h2 * double(b) / double(q2_levels);
      if (std::fabs(v) <= thr) return true;
    }
  }
  return false;
}

MacCellCheck mac_cell_check_bruteforce(double h1, double h2, int n,
                                       int q1_levels, int q2_levels) {
  MacCellCheck out;
  double best = -1;
  const double thr = 2.0;
  for (int a = 0; a < q1_levels; ++a) {
    for (int b = 0; b < q2_levels; ++b) {
      for (int ap = 0; ap < q1_levels; ++ap) {
        for (int bp = 0; bp < q2_levels; ++bp) {
          if (a == ap && b == bp) continue;
          double u1 = double(a) / q1_levels, u2 = double(b) / q2_levels;
          double u1p = double(ap) / q1_levels, u2p = double(bp) / q2_levels;
          double dist =
              std::fabs(std::ldexp(h1 * (u1 - u1p) + h2 * (u2 - u2p), n));
          if (best < 0 || dist < best) best = dist;
          if (dist <= thr && !out.black) {
            out.black = true;
            out.u1 = u1;
            out.u2 = u2;
            out.u1p = u1p;
            out.u2p = u2p;
          }
        }
      }
    }
  }
  out.min_pair_distance = best;
  return out;
}

MacMap mac_outage_map(int n, int grid, int q1_levels, int q2_levels) {
  if (grid < 2) throw std::domain_error("grid must be at least 2");
  if (n < 0) throw std::domain_error("n must be nonnegative");
  MacMap map;
  map.n = n;
  map.grid = grid;
  map.q1_levels = q1_levels;
  map.q2_levels = q2_levels;
  map.black.assign(std::size_t(grid) * grid, 0);

  std::atomic<std::uint64_t> count{0};
  parallel_for(0, std::uint64_t(grid) * grid,
               [&](std::uint64_t lo, std::uint64_t hi) {
                 std::uint64_t local = 0;
                 for (std::uint64_t idx = lo; idx < hi; ++idx) {
                   int row = int(idx) / grid;  // h2 index
                   int col = int(idx) % grid;  // h1 index
                   double h1 = 1.0 + (col + 0.5) / grid;
                   double h2 = 1.0 + (row + 0.5) / grid;
                   if (mac_cell_black(h1, h2, n, q1_levels, q2_levels)) {
                     map.black[idx] = 1;
                     ++local;
                   }
                 }
                 count += local;
               });
  map.black_fraction = double(count) / double(std::size_t(grid) * grid);

  int mid = grid / 2;
  bool in_run = false;
  for (int col = 0; col < grid; ++col) {
    bool b = map.is_black(mid, col);
    if (b && !in_run) ++map.mid_row_strips;
    in_run = b;
  }
  return map;
}

void write_pgm(const MacMap& map, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << "P5\n" << map.grid << " " << map.grid << "\n255\n";
  // top row = largest h2
  for (int row = map.grid - 1; row >= 0; --row) {
    for (int col = 0; col < map.grid; ++col) {
      char byte = map.is_black(row, col) ? '\0' : '\xff';
      f.write(&byte, 1);
    }
  }
}

void write_csv(const MacMap& map, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << "h1,h2,black\n";
  for (int row = 0; row < map.grid; ++row) {
    for (int col = 0; col < map.grid; ++col) {
      double h1 = 1.0 + (col + 0.5) / map.grid;
      double h2 = 1.0 + (row + 0.5) / map.grid;
      f << h1 << "," << h2 << "," << int(map.is_black(row, col)) << "\n";
    }
  }
}

}  // namespace xchan
