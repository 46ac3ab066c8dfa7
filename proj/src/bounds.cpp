#include "xchan/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace xchan {

namespace {

int pos(int v) { return v > 0 ? v : 0; }

using i128 = __int128;

// Determinant of a 4 x 4 integer matrix via 2x2 minors.
i128 det4(const std::array<std::array<i128, 4>, 4>& m) {
  const i128 s0 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const i128 s1 = m[0][0] * m[1][2] - m[0][2] * m[1][0];
  const i128 s2 = m[0][0] * m[1][3] - m[0][3] * m[1][0];
  const i128 s3 = m[0][1] * m[1][2] - m[0][2] * m[1][1];
  const i128 s4 = m[0][1] * m[1][3] - m[0][3] * m[1][1];
  const i128 s5 = m[0][2] * m[1][3] - m[0][3] * m[1][2];
  const i128 c5 = m[2][2] * m[3][3] - m[2][3] * m[3][2];
  const i128 c4 = m[2][1] * m[3][3] - m[2][3] * m[3][1];
  const i128 c3 = m[2][1] * m[3][2] - m[2][2] * m[3][1];
  const i128 c2 = m[2][0] * m[3][3] - m[2][3] * m[3][0];
  const i128 c1 = m[2][0] * m[3][2] - m[2][2] * m[3][0];
  const i128 c0 = m[2][0] * m[3][1] - m[2][1] * m[3][0];
  return s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0;
}

}  // namespace

BoundSet<Rational> det_bounds(const ChannelLevels& n) {
  n.validate();
  BoundSet<Rational> b;
  b.rhs[0] = Rational(std::max(n.n11, n.n12) + pos(n.n22 - n.n12));
  b.rhs[1] = Rational(std::max(n.n21, n.n22) + pos(n.n11 - n.n21));
  b.rhs[2] = Rational(std::max(n.n11, n.n12) + pos(n.n21 - n.n11));
  b.rhs[3] = Rational(std::max(n.n21, n.n22) + pos(n.n12 - n.n22));
  b.rhs[4] = Rational(std::max(n.n12, n.n11 - n.n21) +
                      std::max(n.n21, n.n22 - n.n12));
  b.rhs[5] = Rational(std::max(n.n11, n.n12 - n.n22) +
                      std::max(n.n22, n.n21 - n.n11));
  b.rhs[6] = Rational(std::max(n.n11, n.n12) +
                      std::max(n.n21, n.n22 - n.n12) + pos(n.n11 - n.n21));
  b.rhs[7] = Rational(std::max(n.n11, n.n12) +
                      std::max(n.n22, n.n21 - n.n11) + pos(n.n12 - n.n22));
  b.rhs[8] = Rational(std::max(n.n22, n.n21) +
                      std::max(n.n11, n.n12 - n.n22) + pos(n.n21 - n.n11));
  b.rhs[9] = Rational(std::max(n.n22, n.n21) +
                      std::max(n.n12, n.n11 - n.n21) + pos(n.n22 - n.n12));
  return b;
}

BoundSet<double> gauss_bounds(const ChannelLevels& n, const FineGains& h) {
  n.validate();
  h.validate();
  auto snr = [](int lev, double hh) { return std::ldexp(hh * hh, 2 * lev); };
  const double s11 = snr(n.n11, h.h11);
  const double s12 = snr(n.n12, h.h12);
  const double s21 = snr(n.n21, h.h21);
  const double s22 = snr(n.n22, h.h22);
  auto lg = [](double x) { return 0.5 * std::log2(x); };

  BoundSet<double> b;
  b.rhs[0] = lg(1 + s11 + s12) + lg(1 + s22 / (1 + s12));
  b.rhs[1] = lg(1 + s22 + s21) + lg(1 + s11 / (1 + s21));
  b.rhs[2] = lg(1 + s11 + s12) + lg(1 + s21 / (1 + s11));
  b.rhs[3] = lg(1 + s22 + s21) + lg(1 + s12 / (1 + s22));
  b.rhs[4] = lg(1 + s12 + s11 / (1 + s21)) + lg(1 + s21 + s22 / (1 + s12));
  b.rhs[5] = lg(1 + s11 + s12 / (1 + s22)) + lg(1 + s22 + s21 / (1 + s11));
  b.rhs[6] = lg(1 + s11 + s12) + lg(1 + s21 + s22 / (1 + s12)) +
             lg(1 + s11 / (1 + s21));
  b.rhs[7] = lg(1 + s12 + s11) + lg(1 + s22 + s21 / (1 + s11)) +
             lg(1 + s12 / (1 + s22));
  b.rhs[8] = lg(1 + s21 + s22) + lg(1 + s11 + s12 / (1 + s22)) +
             lg(1 + s21 / (1 + s11));
  b.rhs[9] = lg(1 + s22 + s21) + lg(1 + s12 + s11 / (1 + s21)) +
             lg(1 + s22 / (1 + s12));
  return b;
}

LpResult<Rational> max_sum_rate(const BoundSet<Rational>& bounds) {
  // Hyperplanes: 10 bounds (integer rows) plus the 4 coordinate planes.
  // Every vertex of the feasible region is the solution of 4 of them;
  // all arithmetic is on integer determinants, so the result is exact.
  std::array<std::array<i128, 4>, 14> rows{};
  std::array<i128, 14> rhs{};
  for (int i = 0; i < kNumBounds; ++i) {
    for (int j = 0; j < 4; ++j) rows[i][j] = kBoundCoeffs[i][j];
    if (!bounds.rhs[i].is_integer())
      throw std::domain_error("deterministic bounds must be integers");
    rhs[i] = bounds.rhs[i].num();
  }
  for (int j = 0; j < 4; ++j) {
    rows[kNumBounds + j][j] = 1;
    rhs[kNumBounds + j] = 0;
  }

  bool found = false;
  Rational best;
  std::array<Rational, 4> best_vertex{};
  std::array<int, 4> best_subset{};

  std::array<int, 4> pick{};
  for (pick[0] = 0; pick[0] < 14; ++pick[0])
  for (pick[1] = pick[0] + 1; pick[1] < 14; ++pick[1])
  for (pick[2] = pick[1] + 1; pick[2] < 14; ++pick[2])
  for (pick[3] = pick[2] + 1; pick[3] < 14; ++pick[3]) {
    std::array<std::array<i128, 4>, 4> m{};
    for (int r = 0; r < 4; ++r) m[r] = rows[pick[r]];
    i128 d = det4(m);
    if (d == 0) continue;

    // Cramer solve: x_j = det_j / d.
    std::array<i128, 4> num{};
    for (int j = 0; j < 4; ++j) {
      std::array<std::array<i128, 4>, 4> mj = m;
      for (int r = 0; r < 4; ++r) mj[r][j] = rhs[pick[r]];
      num[j] = det4(mj);
    }
    i128 den = d;
    if (den < 0) {
      den = -den;
      for (auto& v : num) v = -v;
    }
    // Nonnegativity.
    bool ok = true;
    for (int j = 0; j < 4 && ok; ++j)
      if (num[j] < 0) ok = false;
    if (!ok) continue;
    // All ten bounds.
    for (int i = 0; i < kNumBounds && ok; ++i) {
      i128 lhs = 0;
      for (int j = 0; j < 4; ++j) lhs += i128(kBoundCoeffs[i][j]) * num[j];
      if (lhs > rhs[i] * den) ok = false;
    }
    if (!ok) continue;

    i128 sum_num = num[0] + num[1] + num[2] + num[3];
    Rational value(static_cast<long long>(sum_num),
                   static_cast<long long>(den));
    if (!found || best < value) {
      found = true;
      best = value;
      for (int j = 0; j < 4; ++j)
        best_vertex[j] =
            Rational(static_cast<long long>(num[j]), static_cast<long long>(den));
      best_subset = pick;
    }
  }
  if (!found) throw std::logic_error("LP vertex enumeration found no vertex");

  LpResult<Rational> out;
  out.optimum = best;
  out.vertex = best_vertex;
  for (int r = 0; r < 4; ++r) {
    int idx = best_subset[r];
    out.active.push_back(idx < kNumBounds
                             ? std::string(kBoundLabels[idx])
                             : "R" + std::to_string(idx - kNumBounds + 1) +
                                   ">=0");
  }
  return out;
}

LpResult<double> max_sum_rate(const BoundSet<double>& bounds) {
  std::array<std::array<long double, 4>, 14> rows{};
  std::array<long double, 14> rhs{};
  for (int i = 0; i < kNumBounds; ++i) {
    for (int j = 0; j < 4; ++j) rows[i][j] = kBoundCoeffs[i][j];
    rhs[i] = bounds.rhs[i];
  }
  for (int j = 0; j < 4; ++j) {
    rows[kNumBounds + j][j] = 1;
    rhs[kNumBounds + j] = 0;
  }
  const long double slack = 1e-9L;

  bool found = false;
  long double best = 0;
  std::array<double, 4> best_vertex{};
  std::array<int, 4> best_subset{};

  std::array<int, 4> pick{};
  for (pick[0] = 0; pick[0] < 14; ++pick[0])
  for (pick[1] = pick[0] + 1; pick[1] < 14; ++pick[1])
  for (pick[2] = pick[1] + 1; pick[2] < 14; ++pick[2])
  for (pick[3] = pick[2] + 1; pick[3] < 14; ++pick[3]) {
    long double m[4][5];
    for (int r = 0; r < 4; ++r) {
      for (int j = 0; j < 4; ++j) m[r][j] = rows[pick[r]][j];
      m[r][4] = rhs[pick[r]];
    }
    // Gaussian elimination with partial pivoting.
    bool singular = false;
    for (int col = 0; col < 4 && !singular; ++col) {
      int piv = col;
      for (int r = col + 1; r < 4; ++r)
        if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
      if (std::fabs(m[piv][col]) < 1e-12L) {
        singular = true;
        break;
      }
      std::swap(m[piv], m[col]);
      for (int r = 0; r < 4; ++r) {
        if (r == col) continue;
        long double f = m[r][col] / m[col][col];
        for (int j = col; j <= 4; ++j) m[r][j] -= f * m[col][j];
      }
    }
    if (singular) continue;
    std::array<long double, 4> x{};
    for (int j = 0; j < 4; ++j) x[j] = m[j][4] / m[j][j];

    bool ok = true;
    for (int j = 0; j < 4 && ok; ++j)
      if (x[j] < -slack) ok = false;
    for (int i = 0; i < kNumBounds && ok; ++i) {
      long double lhs = 0;
      for (int j = 0; j < 4; ++j) lhs += kBoundCoeffs[i][j] * x[j];
      if (lhs > rhs[i] + slack) ok = false;
    }
    if (!ok) continue;
    long double sum = x[0] + x[1] + x[2] + x[3];
    if (!found || sum > best) {
      found = true;
      best = sum;
      for (int j = 0; j < 4; ++j) best_vertex[j] = double(x[j]);
      best_subset = pick;
    }
  }
  if (!found) throw std::logic_error("LP vertex enumeration found no vertex");

  LpResult<double> out;
  out.optimum = double(best);
  out.vertex = best_vertex;
  for (int r = 0; r < 4; ++r) {
    int idx = best_subset[r];
    out.active.push_back(idx < kNumBounds
                             ? std::string(kBoundLabels[idx])
                             : "R" + std::to_string(idx - kNumBounds + 1) +
                                   ">=0");
  }
  return out;
}

bool feasible(const BoundSet<Rational>& bounds,
              const std::array<Rational, 4>& rates) {
  for (const Rational& r : rates)
    if (r < Rational(0)) return false;
  for (int i = 0; i < kNumBounds; ++i) {
    Rational lhs(0);
    for (int j = 0; j < 4; ++j)
      lhs = lhs + Rational(kBoundCoeffs[i][j]) * rates[j];
    if (bounds.rhs[i] < lhs) return false;
  }
  return true;
}

std::array<double, 4> combined_gauss_bounds(const BoundSet<double>& b) {
  return {
      (b.rhs[0] + b.rhs[1] + b.rhs[2] + b.rhs[3]) / 3.0,
      b.rhs[4],
      (b.rhs[3] + b.rhs[6]) / 2.0,
      (b.rhs[2] + b.rhs[9]) / 2.0,
  };
}

SandwichReport sandwich_check(const ChannelLevels& n) {
  CapacityApprox cap = capacity_approx(n);
  RateAllocation a = allocate(n);
  BoundSet<Rational> b = det_bounds(n);
  LpResult<Rational> lp = max_sum_rate(b);

  SandwichReport rep;
  rep.capacity_approx = cap.d;
  rep.lp_optimum = lp.optimum;
  rep.alloc_sum = a.sum_rate();

  Rational sum(a.sum_rate());
  rep.alloc_in_window = cap.d - Rational(4) <= sum && sum <= cap.d;
  rep.lp_below_d = lp.optimum <= cap.d;
  std::array<Rational, 4> tuple = {Rational(a.r11c + a.r11p), Rational(a.r12),
                                   Rational(a.r21), Rational(a.r22c + a.r22p)};
  rep.alloc_feasible = feasible(b, tuple);
  rep.lp_at_least_alloc = lp.optimum >= sum;
  rep.lp_equals_d = lp.optimum == cap.d;
  rep.ok = rep.alloc_in_window && rep.lp_below_d && rep.alloc_feasible &&
           rep.lp_at_least_alloc;
  if (!rep.alloc_in_window) rep.violations.push_back("allocation outside [D-4, D]");
  if (!rep.lp_below_d) rep.violations.push_back("LP optimum above D");
  if (!rep.alloc_feasible) rep.violations.push_back("allocation violates a bound");
  if (!rep.lp_at_least_alloc) rep.violations.push_back("LP below allocation sum");
  return rep;
}

GaussSandwichReport sandwich_check_gauss(const ChannelLevels& n,
                                         const FineGains& h) {
  CapacityApprox cap = capacity_approx(n);
  auto combos = combined_gauss_bounds(gauss_bounds(n, h));
  GaussSandwichReport rep;
  rep.min_combined = *std::min_element(combos.begin(), combos.end());
  rep.d_plus_4 = cap.d.to_double() + 4.0;
  rep.ok = rep.min_combined <= rep.d_plus_4 + 1e-9;
  return rep;
}

}  // namespace xchan
