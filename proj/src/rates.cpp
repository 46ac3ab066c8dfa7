#include "xchan/rates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace xchan {

namespace {

int pos(int v) { return v > 0 ? v : 0; }

// floor(a/b) for positive b, correct for negative a
int floor_div(int a, int b) {
  int q = a / b;
  return (a % b != 0 && (a < 0)) ? q - 1 : q;
}

ChannelLevels relabel(const ChannelLevels& n) {
  return ChannelLevels{n.n22, n.n21, n.n12, n.n11};
}

RateAllocation relabel(const RateAllocation& a) {
  RateAllocation out;
  out.r11c = a.r22c;
  out.r11p = a.r22p;
  out.r12 = a.r21;
  out.r21 = a.r12;
  out.r22c = a.r11c;
  out.r22p = a.r11p;
  out.case_tag = a.case_tag;
  return out;
}

void require_strong_direct(const ChannelLevels& n) {
  n.validate();
  if (!n.strong_direct())
    throw std::domain_error("operation requires strong direct links");
}

// Case tag assuming n22 >= n11; boundaries compared exactly via doubling.
CaseTag classify_ordered(const ChannelLevels& n) {
  const int s = n.n12 + n.n21;
  if (s <= n.n11) return CaseTag::kI;
  if (s <= n.n22) return CaseTag::kII;
  if (2 * s <= 2 * n.n11 + n.n22) return CaseTag::kIII;
  if (2 * s <= 3 * n.n22) return CaseTag::kIV;
  return CaseTag::kV;
}

RateAllocation allocate_ordered(const ChannelLevels& n) {
  RateAllocation a;
  a.case_tag = classify_ordered(n);
  a.r11p = n.n11 - n.n21;
  a.r22p = n.n22 - n.n12;
  switch (a.case_tag) {
    case CaseTag::kI:
      break;
    case CaseTag::kII:
      a.r22c = n.n12 - a.r11p;
      break;
    case CaseTag::kIII:
      a.r12 = pos(n.n12 + 2 * n.n21 - n.n11 - n.n22);
      a.r21 = pos(n.n21 + 2 * n.n12 - n.n11 - n.n22);
      a.r11c = n.n21 - a.r22p - a.r21;
      a.r22c = n.n12 - a.r11p - a.r12;
      break;
    case CaseTag::kIV:
      a.r21 = floor_div(2 * n.n12 - n.n22, 2);
      a.r12 = floor_div(2 * n.n21 - n.n22, 2);
      a.r11c = a.r12;
      a.r22c = n.n22 - n.n21;
      break;
    case CaseTag::kV:
      a.r12 = floor_div(2 * n.n21 - n.n12, 3);
      a.r11c = a.r12;
      a.r21 = floor_div(2 * n.n12 - n.n21, 3);
      a.r22c = a.r21;
      break;
  }
  if (a.r11c < 0 || a.r11p < 0 || a.r12 < 0 || a.r21 < 0 || a.r22c < 0 ||
      a.r22p < 0)
    throw std::logic_error("allocation produced a negative rate");
  return a;
}

struct Inequality {
  std::string label;
  double lhs = 0;
  double rhs = 0;
  bool active = true;
};

// The six decoding inequalities with the removal rules applied. L is the
// slack subtracted on the a/b lines; c_extra is the constant on the c
// lines (0 deterministic, -6 Gaussian).
std::array<Inequality, 6> decoding_inequalities(const RateAllocation& a,
                                                const ChannelLevels& n,
                                                double penalty,
                                                double c_extra) {
  std::array<Inequality, 6> q;
  const int max1 = std::max(a.r21, a.r22c);   // interference seen at rx1
  const int max2 = std::max(a.r12, a.r11c);   // interference seen at rx2
  q[0] = {"rx1.a", double(a.r11c + max1 + a.r12 + a.r11p), n.n11 - penalty,
          true};
  q[1] = {"rx1.b", double(max1 + a.r12 + a.r11p), n.n12 - penalty, max1 > 0};
  q[2] = {"rx1.c", double(a.r12 + a.r11p),
          double(n.n12 + n.n21 - n.n22) + c_extra, a.r12 > 0};
  q[3] = {"rx2.a", double(a.r22c + max2 + a.r21 + a.r22p), n.n22 - penalty,
          true};
  q[4] = {"rx2.b", double(max2 + a.r21 + a.r22p), n.n21 - penalty, max2 > 0};
  q[5] = {"rx2.c", double(a.r21 + a.r22p),
          double(n.n12 + n.n21 - n.n11) + c_extra, a.r21 > 0};
  return q;
}

constexpr double kEps = 1e-9;

ConditionReport evaluate(const std::array<Inequality, 6>& q) {
  ConditionReport rep;
  rep.pass = true;
  for (const Inequality& ineq : q) {
    if (!ineq.active) continue;
    if (ineq.lhs > ineq.rhs + kEps) {
      rep.pass = false;
      rep.violated.push_back(ineq.label);
    }
  }
  return rep;
}

std::array<Inequality, 6> model_inequalities(const RateAllocation& a,
                                             const ChannelLevels& n,
                                             double delta, LinkModel model,
                                             bool ideal) {
  if (!(delta > 0.0) || delta > 1.0)
    throw std::domain_error("delta must lie in (0,1]");
  if (model == LinkModel::kDet) {
    double penalty = ideal ? 0.0 : std::log2(32.0 / delta);
    return decoding_inequalities(a, n, penalty, 0.0);
  }
  double penalty = ideal ? 6.0 : 6.0 + std::log2(13104.0 / delta);
  return decoding_inequalities(a, n, penalty, -6.0);
}

double violation_sum(const std::array<Inequality, 6>& q) {
  double s = 0;
  for (const Inequality& ineq : q)
    if (ineq.active && ineq.lhs > ineq.rhs + kEps) s += ineq.lhs - ineq.rhs;
  return s;
}

}  // namespace

bool operator==(const RateAllocation& a, const RateAllocation& b) {
  return a.r11c == b.r11c && a.r11p == b.r11p && a.r12 == b.r12 &&
         a.r21 == b.r21 && a.r22c == b.r22c && a.r22p == b.r22p;
}

std::string to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::kI: return "I";
    case CaseTag::kII: return "II";
    case CaseTag::kIII: return "III";
    case CaseTag::kIV: return "IV";
    case CaseTag::kV: return "V";
  }
  return "?";
}

CaseTag classify_case(const ChannelLevels& levels) {
  require_strong_direct(levels);
  return levels.n11 <= levels.n22 ? classify_ordered(levels)
                                  : classify_ordered(relabel(levels));
}

RateAllocation allocate(const ChannelLevels& levels) {
  require_strong_direct(levels);
  if (levels.n11 <= levels.n22) return allocate_ordered(levels);
  return relabel(allocate_ordered(relabel(levels)));
}

ConditionReport check_det_conditions(const RateAllocation& a,
                                     const ChannelLevels& levels, double delta,
                                     bool ideal) {
  return evaluate(model_inequalities(a, levels, delta, LinkModel::kDet, ideal));
}

ConditionReport check_gauss_conditions(const RateAllocation& a,
                                       const ChannelLevels& levels,
                                       double delta, bool ideal) {
  return evaluate(
      model_inequalities(a, levels, delta, LinkModel::kGauss, ideal));
}

GaussWindowCaps gauss_window_caps(const ChannelLevels& n) {
  GaussWindowCaps c;
  c.r11c = pos(n.n21 - 2);
  c.r11p = pos(n.n11 - n.n21 - 2);
  c.r12 = pos(n.n12 + n.n21 - n.n22 - 2);
  c.r21 = pos(n.n12 + n.n21 - n.n11 - 2);
  c.r22c = pos(n.n12 - 2);
  c.r22p = pos(n.n22 - n.n12 - 2);
  return c;
}

std::optional<RateAllocation> allocate_penalized(const ChannelLevels& levels,
                                                 double delta,
                                                 LinkModel model) {
  RateAllocation a = allocate(levels);
  if (model == LinkModel::kGauss) {
    GaussWindowCaps cap = gauss_window_caps(levels);
    a.r11c = std::min(a.r11c, cap.r11c);
    a.r11p = std::min(a.r11p, cap.r11p);
    a.r12 = std::min(a.r12, cap.r12);
    a.r21 = std::min(a.r21, cap.r21);
    a.r22c = std::min(a.r22c, cap.r22c);
    a.r22p = std::min(a.r22p, cap.r22p);
  }

  // Trim order: common rates first, then cross, then private.
  std::array<int RateAllocation::*, 6> order = {
      &RateAllocation::r11c, &RateAllocation::r22c, &RateAllocation::r12,
      &RateAllocation::r21,  &RateAllocation::r11p, &RateAllocation::r22p};

  auto current = [&] { return model_inequalities(a, levels, delta, model, false); };

  double v = violation_sum(current());
  while (v > 0) {
    bool stepped = false;
    // Prefer a decrement that strictly shrinks the total violation.
    for (auto field : order) {
      if (a.*field == 0) continue;
      a.*field -= 1;
      double v2 = violation_sum(current());
      if (v2 < v - kEps) {
        v = v2;
        stepped = true;
        break;
      }
      a.*field += 1;
    }
    if (stepped) continue;
    // Tied max{.,.} terms inside a violated inequality can hide the
    // effect of a single decrement; break the tie and try again.
    if (a.r21 == a.r22c && a.r21 > 0) {
      a.r21 -= 1;
      stepped = true;
    } else if (a.r12 == a.r11c && a.r12 > 0) {
      a.r12 -= 1;
      stepped = true;
    }
    if (!stepped) return std::nullopt;
    v = violation_sum(current());
  }
  return a;
}

CapacityApprox capacity_approx(const ChannelLevels& levels) {
  require_strong_direct(levels);
  const int s = levels.n12 + levels.n21;
  CapacityApprox out;
  out.d1 = Rational(pos(s - levels.n11) + pos(s - levels.n22));
  out.d2 = Rational(s + pos(s - levels.n22), 2);
  out.d3 = Rational(s + pos(s - levels.n11), 2);
  out.d4 = Rational(2 * s, 3);
  out.offset = (levels.n11 - levels.n21) + (levels.n22 - levels.n12);
  Rational m = Rational::min(Rational::min(out.d1, out.d2),
                             Rational::min(out.d3, out.d4));
  out.d = m + Rational(out.offset);
  return out;
}

}  // namespace xchan
