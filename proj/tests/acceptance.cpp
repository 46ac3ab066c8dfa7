// Acceptance suite: runs every criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit code = number of
// failing criteria.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "xchan/bounds.hpp"
#include "xchan/det_link.hpp"
#include "xchan/gauss_link.hpp"
#include "xchan/outage.hpp"
#include "xchan/parallel.hpp"
#include "xchan/rng.hpp"
#include "xchan/stats.hpp"

using namespace xchan;

namespace {

int g_failures = 0;

void report(int idx, const char* name, bool pass, double seconds,
            const std::string& detail) {
  std::printf("[%2d] %s  %-34s (%.2f s)  %s\n", idx, pass ? "PASS" : "FAIL",
              name, seconds, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

template <typename Fn>
void criterion(int idx, const char* name, double budget_s, Fn&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool pass = false;
  try {
    pass = fn(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) {
    pass = false;
    detail += " [over time budget]";
  }
  report(idx, name, pass, secs, detail);
}

gf2::BitVec vec_from_bits(std::uint64_t& idx, int width) {
  gf2::BitVec v(width);
  for (int i = 1; i <= width; ++i) {
    if (idx & 1u) v.set(i, true);
    idx >>= 1;
  }
  return v;
}

DetMessages messages_from_index(std::uint64_t idx, const RateAllocation& a) {
  DetMessages m;
  m.m11c = vec_from_bits(idx, a.r11c);
  m.m11p = vec_from_bits(idx, a.r11p);
  m.m12 = vec_from_bits(idx, a.r12);
  m.m21 = vec_from_bits(idx, a.r21);
  m.m22c = vec_from_bits(idx, a.r22c);
  m.m22p = vec_from_bits(idx, a.r22p);
  return m;
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

bool alloc_equals(const RateAllocation& a, int r11p, int r22p, int r11c,
                  int r22c, int r12, int r21) {
  return a.r11p == r11p && a.r22p == r22p && a.r11c == r11c &&
         a.r22c == r22c && a.r12 == r12 && a.r21 == r21;
}

// ---- criterion 1 -----------------------------------------------------

bool reference_allocations(std::string& detail) {
  bool ok = alloc_equals(allocate({10, 8, 4, 13}), 6, 5, 0, 2, 0, 0) &&
            alloc_equals(allocate({11, 8, 9, 13}), 2, 5, 3, 4, 2, 1) &&
            alloc_equals(allocate({18, 16, 16, 26}), 2, 10, 3, 10, 3, 3) &&
            alloc_equals(allocate({12, 12, 9, 13}), 3, 1, 2, 5, 2, 5);
  detail = "four reference allocations";
  return ok;
}

// ---- criterion 2 -----------------------------------------------------

bool toeplitz_example(std::string& detail) {
  auto m = gf2::toeplitz_from_gain(1.3125, 4);
  for (int x = 0; x < 16; ++x) {
    gf2::BitVec in(4);
    for (int i = 0; i < 4; ++i)
      if (x & (1 << i)) in.set(i + 1, true);
    gf2::BitVec out = matvec(m, in);
    bool good = out.get(1) == in.get(1) && out.get(2) == in.get(2) &&
                out.get(3) == (in.get(1) ^ in.get(3)) &&
                out.get(4) == (in.get(2) ^ in.get(4));
    if (!good) {
      detail = "output mismatch at input " + std::to_string(x);
      return false;
    }
  }
  detail = "all 16 inputs";
  return true;
}

// ---- criterion 3 -----------------------------------------------------

bool sandwich_sweep(std::string& detail) {
  std::vector<ChannelLevels> grid;
  for (int n11 = 0; n11 <= 20; ++n11)
    for (int n22 = 0; n22 <= 20; ++n22) {
      int lim = std::min(n11, n22);
      for (int n12 = 0; n12 <= lim; ++n12)
        for (int n21 = 0; n21 <= lim; ++n21)
          grid.push_back({n11, n12, n21, n22});
    }
  std::atomic<std::uint64_t> violations{0};
  parallel_for(0, grid.size(), [&](std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t local = 0;
    for (std::uint64_t i = lo; i < hi; ++i)
      if (!sandwich_check(grid[i]).ok) ++local;
    violations += local;
  });
  detail = std::to_string(grid.size()) + " tuples, " +
           std::to_string(violations.load()) + " violations";
  return violations == 0;
}

// ---- criterion 4 -----------------------------------------------------

bool det_outage_guarantee(std::string& detail) {
  ChannelLevels n{9, 9, 9, 9};
  const double delta = 0.5;
  auto a = allocate_penalized(n, delta, LinkModel::kDet);
  if (!a) {
    detail = "no feasible allocation";
    return false;
  }
  OutageEstimate e = mc_outage_det(n, *a, 10000, 20240917);
  char buf[128];
  std::snprintf(buf, sizeof buf, "failures %llu/%llu, wilson_hi %.4f",
                (unsigned long long)e.failures, (unsigned long long)e.samples,
                e.wilson_hi);
  detail = buf;
  return e.wilson_hi <= delta;
}

// ---- criterion 5 -----------------------------------------------------

bool decoder_oracle_equivalence(std::string& detail) {
  std::atomic<int> mismatches{0};
  std::atomic<int> nontrivial{0};
  std::atomic<int> tested{0};
  parallel_for(0, 2500, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t inst = lo; inst < hi; ++inst) {
      RngStream rng(771100 + inst, 0);
      int n11 = 2 + int(rng.next_u64() % 7);
      int n22 = 2 + int(rng.next_u64() % 7);
      int lim = std::min(n11, n22);
      ChannelLevels n{n11, int(rng.next_u64() % (lim + 1)),
                      int(rng.next_u64() % (lim + 1)), n22};
      auto pick = [&rng](int cap) {
        return cap <= 0 ? 0 : int(rng.next_u64() % std::uint64_t(std::min(cap, 2) + 1));
      };
      RateAllocation a{};
      a.r11c = pick(n.n21);
      a.r11p = pick(n.n11 - n.n21);
      a.r12 = pick(n.n21);
      a.r21 = pick(n.n12);
      a.r22c = pick(n.n12);
      a.r22p = pick(n.n22 - n.n12);
      if (a.sum_rate() > 10) continue;
      ++tested;

      DetChannelGains g = draw_det_gains(rng);
      std::uint64_t truth_idx = rng.next_u64() & ((std::uint64_t{1} << a.sum_rate()) - 1);
      DetMessages truth = messages_from_index(truth_idx, a);
      DetInputs in = pack_inputs(truth, a, n);
      auto [y1, y2] = det_channel_apply(g, in, n);

      for (int rx = 1; rx <= 2; ++rx) {
        const gf2::BitVec& y = rx == 1 ? y1 : y2;
        DecodeOutcome dec = decode_receiver(y, g, a, n, rx);

        // exhaustive preimage scan
        bool unique = true;
        std::optional<std::array<gf2::BitVec, 3>> proj;
        const std::uint64_t total = std::uint64_t{1} << a.sum_rate();
        for (std::uint64_t idx = 0; idx < total && unique; ++idx) {
          DetMessages m = messages_from_index(idx, a);
          auto [c1, c2] = det_channel_apply(g, pack_inputs(m, a, n), n);
          if (!((rx == 1 ? c1 : c2) == y)) continue;
          std::array<gf2::BitVec, 3> p =
              rx == 1 ? std::array<gf2::BitVec, 3>{m.m11c, m.m11p, m.m12}
                      : std::array<gf2::BitVec, 3>{m.m22c, m.m22p, m.m21};
          if (!proj)
            proj = p;
          else if (!((*proj)[0] == p[0] && (*proj)[1] == p[1] && (*proj)[2] == p[2]))
            unique = false;
        }
        bool oracle_ok = proj.has_value() && unique;
        if (dec.ok != oracle_ok) {
          ++mismatches;
          continue;
        }
        if (dec.ok) {
          ++nontrivial;
          if (!(dec.direct_common == (*proj)[0] &&
                dec.direct_private == (*proj)[1] && dec.cross == (*proj)[2]))
            ++mismatches;
        }
      }
    }
  });
  detail = std::to_string(tested.load()) + " instances, " +
           std::to_string(nontrivial.load()) + " decodable receivers, " +
           std::to_string(mismatches.load()) + " disagreements";
  return tested >= 1000 && mismatches == 0 && nontrivial > 400;
}

// ---- criterion 6 -----------------------------------------------------

struct GaussConfig {
  ChannelLevels n;
  RateAllocation a;
};

std::vector<GaussConfig> gauss_test_configs() {
  std::vector<GaussConfig> cfgs;
  {
    RateAllocation a{};
    a.r11c = 2; a.r12 = 2; a.r21 = 2; a.r22c = 2;
    cfgs.push_back({{34, 28, 28, 34}, a});
  }
  {
    RateAllocation a{};
    a.r11c = 3; a.r12 = 2; a.r21 = 2; a.r22c = 3;
    cfgs.push_back({{40, 32, 32, 40}, a});
  }
  {
    RateAllocation a{};
    a.r11c = 2; a.r12 = 2; a.r21 = 1; a.r22c = 2;
    cfgs.push_back({{36, 30, 28, 38}, a});
  }
  return cfgs;
}

bool gauss_distance_guarantee(std::string& detail) {
  const double delta = 0.5;
  std::uint64_t samples = 0, failures = 0;
  for (const GaussConfig& cfg : gauss_test_configs()) {
    if (!check_gauss_conditions(cfg.a, cfg.n, delta).pass) {
      detail = "config fails the decoding conditions";
      return false;
    }
    if (cfg.a.sum_rate() > 12) {
      detail = "config exceeds 12 bits";
      return false;
    }
    OutageEstimate e = mc_outage_gauss(cfg.n, cfg.a, 700, 5150 + cfg.n.n11);
    samples += e.samples;
    failures += e.failures;
  }
  auto [lo, hi] = wilson95(failures, samples);
  (void)lo;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%llu/%llu below 32, wilson_hi %.4f",
                (unsigned long long)failures, (unsigned long long)samples, hi);
  detail = buf;
  return samples >= 2000 && hi <= delta;
}

// ---- criterion 7 -----------------------------------------------------

bool mismatch_bounds(std::string& detail) {
  std::atomic<int> violations{0};
  std::atomic<int> tested{0};
  parallel_for(0, 4000, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t t = lo; t < hi; ++t) {
      if (tested.load() >= 1000) return;
      RngStream rng(88330 + t, 0);
      int n11 = 8 + int(rng.next_u64() % 6);
      int n22 = 8 + int(rng.next_u64() % 6);
      int lim = std::min(n11, n22);
      ChannelLevels n{n11, int(rng.next_u64() % (lim + 1)),
                      int(rng.next_u64() % (lim + 1)), n22};
      GaussWindowCaps cap = gauss_window_caps(n);
      auto pick = [&rng](int c) {
        return c <= 0 ? 0 : int(rng.next_u64() % std::uint64_t(std::min(c, 2) + 1));
      };
      RateAllocation a{};
      a.r11c = pick(cap.r11c);
      a.r11p = pick(cap.r11p);
      a.r12 = pick(cap.r12);
      a.r21 = pick(cap.r21);
      a.r22c = pick(cap.r22c);
      a.r22p = pick(cap.r22p);
      if (a.sum_rate() == 0 || a.sum_rate() > 9) continue;

      FineGains h = draw_fine_gains(rng);
      FineGains hq = quantize_gains(h, n.max_level());
      ModConstellation c = build_constellation(a, n);
      EffectiveGains g = effective_gains(h);
      EffectiveGains gq = effective_gains(hq);
      for (int rx = 1; rx <= 2; ++rx) {
        StreamGrids s = build_stream_grids(c, rx);
        if (double(mismatch_offset(c, h, hq, rx)) > 2.0 + 1e-9) ++violations;
        MinDistanceReport matched = min_distance(receiver_coeffs(g, rx), s);
        if (!matched.finite) continue;
        MinDistanceReport mm = min_distance(receiver_coeffs(gq, rx), s);
        if (double(mm.d) < double(matched.d) - 8.0 - 1e-9) ++violations;
      }
      ++tested;
    }
  });
  detail = std::to_string(tested.load()) + " instances, " +
           std::to_string(violations.load()) + " violations";
  return tested >= 1000 && violations == 0;
}

// ---- criteria 8 and 9 -------------------------------------------------

// Instance with verified distance at least 32 at both receivers.
struct VerifiedInstance {
  ChannelLevels n{34, 28, 28, 34};
  RateAllocation a;
  FineGains h;
  long double d1 = 0, d2 = 0;
  bool found = false;
};

VerifiedInstance find_wide_instance() {
  VerifiedInstance inst;
  inst.a.r11c = 2;
  inst.a.r12 = 2;
  inst.a.r21 = 2;
  inst.a.r22c = 2;
  ModConstellation c = build_constellation(inst.a, inst.n);
  StreamGrids s1 = build_stream_grids(c, 1);
  StreamGrids s2 = build_stream_grids(c, 2);
  for (std::uint64_t k = 0; k < 64 && !inst.found; ++k) {
    RngStream rng(424242, k);
    FineGains h = draw_fine_gains(rng);
    EffectiveGains g = effective_gains(h);
    MinDistanceReport m1 = min_distance(receiver_coeffs(g, 1), s1);
    MinDistanceReport m2 = min_distance(receiver_coeffs(g, 2), s2);
    if (m1.finite && m2.finite && m1.d >= 32.0L && m2.d >= 32.0L) {
      inst.h = h;
      inst.d1 = m1.d;
      inst.d2 = m2.d;
      inst.found = true;
    }
  }
  return inst;
}

bool error_rate_consistency(std::string& detail) {
  VerifiedInstance inst = find_wide_instance();
  if (!inst.found) {
    detail = "no wide instance found";
    return false;
  }
  SerEstimate wide = mc_symbol_error(inst.h, inst.n, inst.a, 1000000, 99887,
                                     /*mismatched=*/false);
  double chern = chernoff_error_level(32.0);

  // narrow instance: a single information bit at the top of a 3-level
  // window gives distance about two at receiver one
  ChannelLevels n2{3, 3, 3, 3};
  RateAllocation a2{};
  a2.r11c = 1;
  FineGains h2{1.42, 1.31, 1.27, 1.41};
  ModConstellation c2 = build_constellation(a2, n2);
  StreamGrids s2 = build_stream_grids(c2, 1);
  ReceiverCoeffs rc2 = receiver_coeffs(effective_gains(h2), 1);
  MinDistanceReport d2 = min_distance(rc2, s2);
  double ub = pairwise_union_bound(rc2, s2);
  const std::uint64_t trials2 = 200000;
  SerEstimate narrow =
      mc_symbol_error(h2, n2, a2, trials2, 55443, /*mismatched=*/false);
  double ser1 = double(narrow.errors_rx1) / double(trials2);
  double sigma = binomial_sigma(ub, trials2);

  char buf[256];
  std::snprintf(buf, sizeof buf,
                "wide: d=(%.1Lf,%.1Lf) errors %llu/1e6 (chernoff %.1e); "
                "narrow: d=%.3Lf ser %.4f vs bound %.4f",
                inst.d1, inst.d2, (unsigned long long)wide.errors_any, chern,
                d2.d, ser1, ub);
  detail = buf;
  return wide.errors_any == 0 && d2.finite && d2.d < 4.0L &&
         ser1 <= ub + 3 * sigma;
}

bool cond_entropy_bound(std::string& detail) {
  VerifiedInstance inst = find_wide_instance();
  if (!inst.found) {
    detail = "no wide instance found";
    return false;
  }
  CondEntropyEstimate ce =
      empirical_cond_entropy(inst.h, inst.n, inst.a, 1000000, 10203);
  char buf[128];
  std::snprintf(buf, sizeof buf, "H(v|v_hat) = %.4f bits, d = %.1Lf", ce.bits,
                ce.d);
  detail = buf;
  return ce.distance_verified && ce.bits <= 1.5;
}

// ---- criterion 10 -----------------------------------------------------

bool groshev_criterion(std::string& detail) {
  GroshevParams unit{1.0, 1, 1, 1, 1, 1};
  if (std::fabs(groshev_bound(unit) - 3024.0) > 1e-9) {
    detail = "unit bound is not 3024";
    return false;
  }
  int sets = 0, failures = 0;
  for (double beta : {0.002, 0.004, 0.006}) {
    for (std::int64_t a1 : {1, 2}) {
      for (std::int64_t a2 : {1, 2}) {
        for (std::int64_t q0 : {1, 2}) {
          for (std::int64_t q1 : {1, 2}) {
            for (std::int64_t q2 : {1, 2}) {
              GroshevParams p{beta, a1, a2, q0, q1, q2};
              double bound = groshev_bound(p);
              if (bound >= kGroshevVolume) continue;
              ++sets;
              OutageEstimate e = mc_groshev_measure(p, 1500, 909 + sets);
              double measure = kGroshevVolume * e.estimate;
              double sigma = kGroshevVolume *
                             binomial_sigma(std::max(e.estimate, 1e-4), e.samples);
              if (measure > bound + 3 * sigma) ++failures;
            }
          }
        }
      }
    }
  }
  detail = std::to_string(sets) + " parameter sets, " +
           std::to_string(failures) + " above bound";
  return sets >= 50 && failures == 0;
}

// ---- criterion 11 -----------------------------------------------------

bool dof_trend(std::string& detail) {
  const double delta = 0.5;
  const double gap = 2.0 * std::log2(128.0 / delta) + 4.0;
  double worst = 1e9;
  for (int n = 6; n <= 30; ++n) {
    auto a = allocate_penalized({n, n, n, n}, delta, LinkModel::kDet);
    int achieved = a ? a->sum_rate() : 0;
    double margin = double(achieved) / n - (4.0 / 3.0 - gap / n);
    worst = std::min(worst, margin);
    if (margin < -1e-9) {
      detail = "envelope violated at n = " + std::to_string(n);
      return false;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "n = 6..30, worst margin %.4f", worst);
  detail = buf;
  return true;
}

// ---- criterion 12 -----------------------------------------------------

bool mac_map_consistency(std::string& detail) {
  const int grid = 512;
  MacMap map = mac_outage_map(7, grid);
  std::atomic<std::uint64_t> bad{0};
  parallel_for(0, std::uint64_t(grid) * grid,
               [&](std::uint64_t lo, std::uint64_t hi) {
                 std::uint64_t local = 0;
                 for (std::uint64_t idx = lo; idx < hi; ++idx) {
                   int row = int(idx) / grid, col = int(idx) % grid;
                   double h1 = 1.0 + (col + 0.5) / grid;
                   double h2 = 1.0 + (row + 0.5) / grid;
                   MacCellCheck chk = mac_cell_check_bruteforce(h1, h2, 7);
                   if (chk.black != map.is_black(row, col)) ++local;
                   else if (!chk.black && !(chk.min_pair_distance > 2.0)) ++local;
                 }
                 bad += local;
               });
  MacMap m5 = mac_outage_map(5, grid);
  MacMap m9 = mac_outage_map(9, grid);
  bool shrinking = m5.black_fraction > map.black_fraction &&
                   map.black_fraction > m9.black_fraction;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%llu cell mismatches; black area %.4f > %.4f > %.4f",
                (unsigned long long)bad.load(), m5.black_fraction,
                map.black_fraction, m9.black_fraction);
  detail = buf;
  return bad == 0 && shrinking;
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion(1, "reference allocations", 1.0, reference_allocations);
  criterion(2, "dyadic gain matrix example", 1.0, toeplitz_example);
  criterion(3, "sandwich sweep to level 20", 60.0, sandwich_sweep);
  criterion(4, "deterministic outage budget", 30.0, det_outage_guarantee);
  criterion(5, "decoder vs exhaustive preimage", 60.0, decoder_oracle_equivalence);
  criterion(6, "gaussian min-distance budget", 300.0, gauss_distance_guarantee);
  criterion(7, "mismatch distance bounds", 120.0, mismatch_bounds);
  criterion(8, "error rate vs analytic levels", 300.0, error_rate_consistency);
  criterion(9, "conditional entropy cap", 300.0, cond_entropy_bound);
  criterion(10, "groshev measure vs bound", 300.0, groshev_criterion);
  criterion(11, "degrees-of-freedom envelope", 10.0, dof_trend);
  criterion(12, "outage map self-consistency", 60.0, mac_map_consistency);
  if (g_failures == 0)
    std::printf("all criteria passed\n");
  else
    std::printf("%d criteria failed\n", g_failures);
  return g_failures;
}
