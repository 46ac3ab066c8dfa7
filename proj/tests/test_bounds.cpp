#include <doctest.h>

#include <cmath>

#include "xchan/bounds.hpp"
#include "xchan/rng.hpp"

using namespace xchan;

namespace {

FineGains random_fine(RngStream& rng) {
  FineGains h;
  h.h11 = rng.next_open_closed(1.0, 2.0);
  h.h12 = rng.next_open_closed(1.0, 2.0);
  h.h21 = rng.next_open_closed(1.0, 2.0);
  h.h22 = rng.next_open_closed(1.0, 2.0);
  return h;
}

ChannelLevels random_strong_direct(RngStream& rng, int cap) {
  int n11 = int(rng.next_u64() % (cap + 1));
  int n22 = int(rng.next_u64() % (cap + 1));
  int lim = std::min(n11, n22);
  return {n11, int(rng.next_u64() % (lim + 1)), int(rng.next_u64() % (lim + 1)),
          n22};
}

}  // namespace

TEST_CASE("deterministic bound values") {
  BoundSet<Rational> b = det_bounds({10, 8, 4, 13});
  const long long expect[kNumBounds] = {15, 19, 10, 13, 13, 23, 21, 23, 23, 26};
  for (int i = 0; i < kNumBounds; ++i) CHECK(b.rhs[i] == Rational(expect[i]));

  BoundSet<Rational> zero = det_bounds({0, 0, 0, 0});
  for (int i = 0; i < kNumBounds; ++i) CHECK(zero.rhs[i] == Rational(0));

  // symmetric levels: three-rate bounds collapse to n, the rest to 2n
  for (int n : {3, 9, 17}) {
    BoundSet<Rational> s = det_bounds({n, n, n, n});
    for (int i = 0; i < 4; ++i) CHECK(s.rhs[i] == Rational(n));
    for (int i = 4; i < kNumBounds; ++i) CHECK(s.rhs[i] == Rational(2 * n));
  }
}

TEST_CASE("relabeling the users permutes the bound list consistently") {
  RngStream rng(3, 0);
  for (int t = 0; t < 500; ++t) {
    ChannelLevels n = random_strong_direct(rng, 18);
    ChannelLevels m{n.n22, n.n21, n.n12, n.n11};
    BoundSet<Rational> a = det_bounds(n);
    BoundSet<Rational> b = det_bounds(m);
    CHECK(a.rhs[0] == b.rhs[1]);
    CHECK(a.rhs[2] == b.rhs[3]);
    CHECK(a.rhs[4] == b.rhs[4]);
    CHECK(a.rhs[5] == b.rhs[5]);
    CHECK(a.rhs[6] == b.rhs[9]);
    CHECK(a.rhs[7] == b.rhs[8]);
  }
}

TEST_CASE("exact LP on reference configurations") {
  LpResult<Rational> lp = max_sum_rate(det_bounds({10, 8, 4, 13}));
  CHECK(lp.optimum == Rational(13));

  lp = max_sum_rate(det_bounds({9, 9, 9, 9}));
  CHECK(lp.optimum == Rational(12));  // 4n/3

  for (int n : {3, 6, 12, 15}) {
    lp = max_sum_rate(det_bounds({n, n, n, n}));
    CHECK(lp.optimum == Rational(4 * n, 3));
  }

  // single binding full-sum constraint
  BoundSet<Rational> vac;
  for (int i = 0; i < kNumBounds; ++i) vac.rhs[i] = Rational(1000);
  vac.rhs[4] = Rational(7);
  lp = max_sum_rate(vac);
  CHECK(lp.optimum == Rational(7));
}

TEST_CASE("LP optimum dominates hit-and-run feasible samples") {
  RngStream rng(9, 0);
  for (int t = 0; t < 20; ++t) {
    ChannelLevels n = random_strong_direct(rng, 16);
    BoundSet<Rational> b = det_bounds(n);
    LpResult<Rational> lp = max_sum_rate(b);
    double opt = lp.optimum.to_double();

    std::array<double, 4> x{0, 0, 0, 0};
    for (int step = 0; step < 500; ++step) {
      std::array<double, 4> dir;
      double norm = 0;
      for (double& d : dir) {
        d = rng.next_gauss();
        norm += d * d;
      }
      norm = std::sqrt(norm);
      for (double& d : dir) d /= norm;
      // largest lambda keeping x + lambda*dir feasible
      double lo = 0, hi = 1e18;
      for (int j = 0; j < 4; ++j) {
        if (dir[j] < 0) hi = std::min(hi, -x[j] / dir[j]);
        if (dir[j] > 0) lo = std::max(lo, -x[j] / dir[j]);
      }
      for (int i = 0; i < kNumBounds; ++i) {
        double coef = 0, lhs = 0;
        for (int j = 0; j < 4; ++j) {
          coef += kBoundCoeffs[i][j] * dir[j];
          lhs += kBoundCoeffs[i][j] * x[j];
        }
        if (coef > 1e-12) hi = std::min(hi, (b.rhs[i].to_double() - lhs) / coef);
      }
      if (hi <= 0) continue;
      double lam = hi * rng.next_unit();
      for (int j = 0; j < 4; ++j) x[j] += lam * dir[j];
      double sum = x[0] + x[1] + x[2] + x[3];
      CHECK(sum <= opt + 1e-6);
    }
  }
}

TEST_CASE("floating LP agrees with the exact LP") {
  RngStream rng(15, 0);
  for (int t = 0; t < 100; ++t) {
    ChannelLevels n = random_strong_direct(rng, 14);
    BoundSet<Rational> b = det_bounds(n);
    BoundSet<double> d;
    for (int i = 0; i < kNumBounds; ++i) d.rhs[i] = b.rhs[i].to_double();
    CHECK(max_sum_rate(d).optimum ==
          doctest::Approx(max_sum_rate(b).optimum.to_double()).epsilon(1e-9));
  }
}

TEST_CASE("gaussian bounds approach the small-noise constants") {
  double eps = 1e-9;
  FineGains h{1 + eps, 1 + eps, 1 + eps, 1 + eps};
  BoundSet<double> g = gauss_bounds({0, 0, 0, 0}, h);
  CHECK(g.rhs[0] ==
        doctest::Approx(0.5 * std::log2(3.0) + 0.5 * std::log2(1.5)).epsilon(1e-6));
}

TEST_CASE("gaussian bounds bracket the deterministic ones") {
  const double upper_slack = 0.5 * std::log2(405.0);
  {
    BoundSet<Rational> det = det_bounds({10, 8, 4, 13});
    BoundSet<double> g = gauss_bounds({10, 8, 4, 13}, FineGains{2, 2, 2, 2});
    for (int i = 0; i < kNumBounds; ++i) {
      CHECK(g.rhs[i] >= det.rhs[i].to_double());
      CHECK(g.rhs[i] <= det.rhs[i].to_double() + upper_slack);
    }
  }
  RngStream rng(21, 0);
  for (int t = 0; t < 400; ++t) {
    ChannelLevels n = random_strong_direct(rng, 20);
    FineGains h = random_fine(rng);
    BoundSet<Rational> det = det_bounds(n);
    BoundSet<double> g = gauss_bounds(n, h);
    for (int i = 0; i < kNumBounds; ++i) {
      CHECK(g.rhs[i] >= det.rhs[i].to_double() - 3.5);
      CHECK(g.rhs[i] <= det.rhs[i].to_double() + upper_slack);
    }
  }
}

TEST_CASE("sandwich holds on a small exhaustive grid") {
  for (int n11 = 0; n11 <= 10; ++n11)
    for (int n22 = 0; n22 <= 10; ++n22) {
      int lim = std::min(n11, n22);
      for (int n12 = 0; n12 <= lim; ++n12)
        for (int n21 = 0; n21 <= lim; ++n21) {
          SandwichReport rep = sandwich_check({n11, n12, n21, n22});
          CHECK(rep.ok);
        }
    }
}

TEST_CASE("combined gaussian bounds stay within four bits of the approximation") {
  RngStream rng(27, 0);
  for (int t = 0; t < 1000; ++t) {
    ChannelLevels n = random_strong_direct(rng, 24);
    GaussSandwichReport rep = sandwich_check_gauss(n, random_fine(rng));
    CHECK(rep.ok);
  }
}
