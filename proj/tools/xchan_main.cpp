// Command-line front end for the X-channel interference-alignment lab.
//
// Exit codes: 0 ok, 1 check violation or infeasible request,
// 2 usage/validation error, 3 enumeration budget exceeded.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "xchan/bounds.hpp"
#include "xchan/det_link.hpp"
#include "xchan/gauss_link.hpp"
#include "xchan/outage.hpp"
#include "xchan/rates.hpp"
#include "xchan/rng.hpp"

using nlohmann::json;
using namespace xchan;

namespace {

struct LevelsOpt {
  std::vector<int> v;
  ChannelLevels parse() const {
    if (v.size() != 4)
      throw CLI::ValidationError("--n expects n11,n12,n21,n22");
    ChannelLevels n{v[0], v[1], v[2], v[3]};
    n.validate();
    return n;
  }
};

struct GainsOpt {
  std::vector<double> v;
  bool given() const { return !v.empty(); }
  FineGains parse() const {
    if (v.size() != 4)
      throw CLI::ValidationError("--h expects h11,h12,h21,h22");
    FineGains h{v[0], v[1], v[2], v[3]};
    h.validate();
    return h;
  }
};

json to_json(const RateAllocation& a) {
  return json{{"r11c", a.r11c}, {"r11p", a.r11p}, {"r12", a.r12},
              {"r21", a.r21},   {"r22c", a.r22c}, {"r22p", a.r22p},
              {"sum", a.sum_rate()}};
}

json to_json(const ChannelLevels& n) {
  return json{{"n11", n.n11}, {"n12", n.n12}, {"n21", n.n21}, {"n22", n.n22}};
}

json to_json(const FineGains& h) {
  return json{{"h11", h.h11}, {"h12", h.h12}, {"h21", h.h21}, {"h22", h.h22}};
}

json to_json(const OutageEstimate& e) {
  return json{{"samples", e.samples},     {"failures", e.failures},
              {"estimate", e.estimate},   {"wilson_lo", e.wilson_lo},
              {"wilson_hi", e.wilson_hi}, {"seed", e.seed}};
}

json to_json(const ConditionReport& r) {
  return json{{"pass", r.pass}, {"violated", r.violated}};
}

void emit(const json& j) { std::cout << j.dump() << "\n"; }

FineGains sample_gains(std::uint64_t seed) {
  RngStream rng(seed, 0);
  FineGains h;
  h.h11 = rng.next_open_closed(1.0, 2.0);
  h.h12 = rng.next_open_closed(1.0, 2.0);
  h.h21 = rng.next_open_closed(1.0, 2.0);
  h.h22 = rng.next_open_closed(1.0, 2.0);
  return h;
}

int cmd_rates(const ChannelLevels& n, double delta, LinkModel model) {
  RateAllocation ideal = allocate(n);
  CapacityApprox cap = capacity_approx(n);
  auto penalized = allocate_penalized(n, delta, model);

  json out;
  out["config"] = {{"command", "rates"},
                   {"n", to_json(n)},
                   {"delta", delta},
                   {"model", model == LinkModel::kDet ? "det" : "gauss"}};
  out["case"] = to_string(ideal.case_tag);
  out["D"] = cap.d.to_double();
  out["D_exact"] = cap.d.to_string();
  out["D1"] = cap.d1.to_string();
  out["D2"] = cap.d2.to_string();
  out["D3"] = cap.d3.to_string();
  out["D4"] = cap.d4.to_string();
  out["offset"] = cap.offset;
  out["allocation"] = to_json(ideal);
  out["conditions_ideal"] =
      to_json(model == LinkModel::kDet
                  ? check_det_conditions(ideal, n, delta, /*ideal=*/true)
                  : check_gauss_conditions(ideal, n, delta, /*ideal=*/true));
  if (penalized) {
    out["penalized_allocation"] = to_json(*penalized);
    out["penalized_conditions"] =
        to_json(model == LinkModel::kDet
                    ? check_det_conditions(*penalized, n, delta)
                    : check_gauss_conditions(*penalized, n, delta));
  } else {
    out["penalized_allocation"] = nullptr;
  }
  emit(out);
  return penalized ? 0 : 1;
}

int cmd_det_sim(const ChannelLevels& n, double delta, std::uint64_t samples,
                std::uint64_t seed) {
  auto a = allocate_penalized(n, delta, LinkModel::kDet);
  if (!a) {
    emit(json{{"error", "no feasible allocation"}});
    return 1;
  }
  OutageEstimate e = mc_outage_det(n, *a, samples, seed);
  json out;
  out["config"] = {{"command", "det-sim"}, {"n", to_json(n)},
                   {"delta", delta},       {"samples", samples},
                   {"seed", seed}};
  out["allocation"] = to_json(*a);
  out["outage"] = to_json(e);
  out["within_delta"] = e.wilson_hi <= delta;
  emit(out);
  return e.wilson_hi <= delta ? 0 : 1;
}

int cmd_gauss_sim(const ChannelLevels& n, const GainsOpt& hopt, double delta,
                  std::uint64_t trials, std::uint64_t seed, bool mismatched,
                  std::uint64_t budget) {
  auto a = allocate_penalized(n, delta, LinkModel::kGauss);
  if (!a) {
    emit(json{{"error", "no feasible allocation"}});
    return 1;
  }
  FineGains h = hopt.given() ? hopt.parse() : sample_gains(seed ^ 0x5eedULL);
  SerEstimate e = mc_symbol_error(h, n, *a, trials, seed, mismatched, budget);
  json out;
  out["config"] = {{"command", "gauss-sim"}, {"n", to_json(n)},
                   {"h", to_json(h)},        {"delta", delta},
                   {"trials", trials},       {"seed", seed},
                   {"mismatched", mismatched}};
  out["allocation"] = to_json(*a);
  out["errors_rx1"] = e.errors_rx1;
  out["errors_rx2"] = e.errors_rx2;
  out["errors_any"] = e.errors_any;
  out["ser"] = e.rate;
  out["wilson_lo"] = e.wilson_lo;
  out["wilson_hi"] = e.wilson_hi;
  emit(out);
  return 0;
}

int cmd_mindist(const ChannelLevels& n, const GainsOpt& hopt, double delta,
                std::uint64_t seed, std::uint64_t budget) {
  auto a = allocate_penalized(n, delta, LinkModel::kGauss);
  if (!a) {
    emit(json{{"error", "no feasible allocation"}});
    return 1;
  }
  FineGains h = hopt.given() ? hopt.parse() : sample_gains(seed ^ 0x5eedULL);
  ModConstellation c = build_constellation(*a, n);
  EffectiveGains g = effective_gains(h);
  json out;
  out["config"] = {{"command", "mindist"},
                   {"n", to_json(n)},
                   {"h", to_json(h)},
                   {"delta", delta},
                   {"budget", budget}};
  out["allocation"] = to_json(*a);
  out["fits"] = c.fits;
  out["enumeration_bits"] = c.total_bits();
  for (int rx = 1; rx <= 2; ++rx) {
    StreamGrids s = build_stream_grids(c, rx);
    MinDistanceReport r = min_distance(receiver_coeffs(g, rx), s, budget);
    json jr;
    jr["finite"] = r.finite;
    jr["d"] = r.finite ? double(r.d) : 0.0;
    jr["grid_sizes"] = {r.grid_sizes[0], r.grid_sizes[1], r.grid_sizes[2]};
    jr["argmin_delta"] = {r.argmin_delta[0], r.argmin_delta[1],
                          r.argmin_delta[2]};
    out[rx == 1 ? "rx1" : "rx2"] = jr;
  }
  emit(out);
  return 0;
}

int cmd_outage(const std::string& model, const ChannelLevels& n, double delta,
               std::uint64_t samples, std::uint64_t seed, double threshold,
               std::uint64_t budget) {
  LinkModel lm = model == "det" ? LinkModel::kDet : LinkModel::kGauss;
  auto a = allocate_penalized(n, delta, lm);
  if (!a) {
    emit(json{{"error", "no feasible allocation"}});
    return 1;
  }
  OutageEstimate e =
      lm == LinkModel::kDet
          ? mc_outage_det(n, *a, samples, seed)
          : mc_outage_gauss(n, *a, samples, seed, threshold, budget);
  json out;
  out["config"] = {{"command", "outage"},   {"model", model},
                   {"n", to_json(n)},       {"delta", delta},
                   {"samples", samples},    {"seed", seed},
                   {"threshold", threshold}};
  out["allocation"] = to_json(*a);
  out["outage"] = to_json(e);
  out["within_delta"] = e.wilson_hi <= delta;
  emit(out);
  return e.wilson_hi <= delta ? 0 : 1;
}

int cmd_mac_map(int n, int grid, const std::string& out_path,
                const std::string& format, int q1, int q2) {
  MacMap map = mac_outage_map(n, grid, q1, q2);
  if (!out_path.empty()) {
    if (format == "csv")
      write_csv(map, out_path);
    else
      write_pgm(map, out_path);
  }
  json out;
  out["config"] = {{"command", "mac-map"}, {"n", n},
                   {"grid", grid},         {"q1_levels", q1},
                   {"q2_levels", q2},      {"out", out_path},
                   {"format", format}};
  out["black_fraction"] = map.black_fraction;
  out["mid_row_strips"] = map.mid_row_strips;
  emit(out);
  return 0;
}

int cmd_bounds(const ChannelLevels& n, const GainsOpt& hopt) {
  CapacityApprox cap = capacity_approx(n);
  BoundSet<Rational> det = det_bounds(n);
  SandwichReport rep = sandwich_check(n);

  json out;
  out["config"] = {{"command", "bounds"}, {"n", to_json(n)}};
  json jb;
  for (int i = 0; i < kNumBounds; ++i)
    jb[kBoundLabels[i]] = det.rhs[i].to_string();
  out["det_bounds"] = jb;
  out["D"] = cap.d.to_string();
  out["lp_optimum"] = rep.lp_optimum.to_string();
  out["lp_equals_D"] = rep.lp_equals_d;
  out["sandwich_ok"] = rep.ok;
  out["violations"] = rep.violations;
  if (hopt.given()) {
    FineGains h = hopt.parse();
    BoundSet<double> gb = gauss_bounds(n, h);
    json jg;
    for (int i = 0; i < kNumBounds; ++i) jg[kBoundLabels[i]] = gb.rhs[i];
    out["h"] = to_json(h);
    out["gauss_bounds"] = jg;
    auto combos = combined_gauss_bounds(gb);
    out["gauss_combined"] = {combos[0], combos[1], combos[2], combos[3]};
    GaussSandwichReport gr = sandwich_check_gauss(n, h);
    out["gauss_min_combined"] = gr.min_combined;
    out["gauss_within_D_plus_4"] = gr.ok;
  }
  emit(out);
  return rep.ok ? 0 : 1;
}

int cmd_dof_table(int n_min, int n_max, double delta, std::uint64_t samples,
                  std::uint64_t seed, const std::string& format) {
  bool with_mc = samples > 0;
  if (format == "csv") {
    std::cout << "n,achieved,ratio,limit";
    if (with_mc) std::cout << ",outage_estimate,outage_wilson_hi";
    std::cout << "\n";
  }
  bool envelope_ok = true;
  const double envelope_gap = 2.0 * std::log2(128.0 / delta) + 4.0;
  for (int n = n_min; n <= n_max; ++n) {
    ChannelLevels lv{n, n, n, n};
    auto a = allocate_penalized(lv, delta, LinkModel::kDet);
    int achieved = a ? a->sum_rate() : 0;
    double ratio = double(achieved) / n;
    if (ratio < 4.0 / 3.0 - envelope_gap / n - 1e-9) envelope_ok = false;
    OutageEstimate e;
    if (with_mc && a) e = mc_outage_det(lv, *a, samples, seed + n);
    if (format == "csv") {
      std::printf("%d,%d,%.6f,%.6f", n, achieved, ratio, 4.0 / 3.0);
      if (with_mc) std::printf(",%.6f,%.6f", e.estimate, e.wilson_hi);
      std::printf("\n");
    } else {
      json row{{"n", n},
               {"achieved", achieved},
               {"ratio", ratio},
               {"limit", 4.0 / 3.0}};
      if (with_mc) {
        row["outage_estimate"] = e.estimate;
        row["outage_wilson_hi"] = e.wilson_hi;
      }
      emit(row);
    }
  }
  return envelope_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"X-channel interference-alignment simulation lab"};
  app.require_subcommand(1);

  LevelsOpt nopt;
  GainsOpt hopt;
  double delta = 1.0;
  std::uint64_t samples = 10000, trials = 100000, seed = 0, budget = kDefaultEnumBudget;
  double threshold = 32.0;
  bool mismatched = false;
  std::string model = "det", out_path, format = "pgm";
  int map_n = 7, grid = 512, q1 = 8, q2 = 2, n_min = 6, n_max = 30;

  auto add_n = [&](CLI::App* c) {
    c->add_option("--n", nopt.v, "channel levels n11,n12,n21,n22")
        ->required()
        ->delimiter(',');
  };
  auto add_h = [&](CLI::App* c) {
    c->add_option("--gains", hopt.v, "fine gains h11,h12,h21,h22 in (1,2]")
        ->delimiter(',');
  };

  auto* rates_cmd = app.add_subcommand("rates", "allocation and capacity approximation");
  add_n(rates_cmd);
  rates_cmd->add_option("--delta", delta, "outage budget in (0,1]");
  rates_cmd->add_option("--model", model)->check(CLI::IsMember({"det", "gauss"}));

  auto* det_sim = app.add_subcommand("det-sim", "deterministic link Monte Carlo");
  add_n(det_sim);
  det_sim->add_option("--delta", delta);
  det_sim->add_option("--samples", samples);
  det_sim->add_option("--seed", seed)->required();

  auto* gauss_sim = app.add_subcommand("gauss-sim", "Gaussian chain symbol errors");
  add_n(gauss_sim);
  add_h(gauss_sim);
  gauss_sim->add_option("--delta", delta);
  gauss_sim->add_option("--trials", trials);
  gauss_sim->add_option("--seed", seed)->required();
  gauss_sim->add_flag("--mismatched", mismatched, "quantized-gain encoders/demodulators");
  gauss_sim->add_option("--budget", budget);

  auto* mindist = app.add_subcommand("mindist", "minimum constellation distance");
  add_n(mindist);
  add_h(mindist);
  mindist->add_option("--delta", delta);
  mindist->add_option("--seed", seed, "used to sample gains when --gains absent");
  mindist->add_option("--budget", budget);

  auto* outage_cmd = app.add_subcommand("outage", "outage-set measurement");
  outage_cmd->add_option("--model", model)->required()->check(CLI::IsMember({"det", "gauss"}));
  add_n(outage_cmd);
  outage_cmd->add_option("--delta", delta);
  outage_cmd->add_option("--samples", samples);
  outage_cmd->add_option("--seed", seed)->required();
  outage_cmd->add_option("--threshold", threshold);
  outage_cmd->add_option("--budget", budget);

  auto* mac_map = app.add_subcommand("mac-map", "two-user outage map");
  mac_map->add_option("--n", map_n, "signal strength exponent")->required();
  mac_map->add_option("--grid", grid);
  mac_map->add_option("--out", out_path);
  mac_map->add_option("--format", format)->check(CLI::IsMember({"pgm", "csv"}));
  mac_map->add_option("--q1-levels", q1);
  mac_map->add_option("--q2-levels", q2);

  auto* bounds_cmd = app.add_subcommand("bounds", "rate-region bounds and LP");
  add_n(bounds_cmd);
  add_h(bounds_cmd);

  auto* dof = app.add_subcommand("dof-table", "symmetric sweep toward 4/3");
  dof->add_option("--n-min", n_min);
  dof->add_option("--n-max", n_max)->required();
  dof->add_option("--delta", delta);
  dof->add_option("--samples", samples, "per-n outage samples (0 = skip)");
  dof->add_option("--seed", seed)->required();
  dof->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (rates_cmd->parsed())
      return cmd_rates(nopt.parse(), delta,
                       model == "gauss" ? LinkModel::kGauss : LinkModel::kDet);
    if (det_sim->parsed())
      return cmd_det_sim(nopt.parse(), delta, samples, seed);
    if (gauss_sim->parsed())
      return cmd_gauss_sim(nopt.parse(), hopt, delta, trials, seed, mismatched,
                           budget);
    if (mindist->parsed())
      return cmd_mindist(nopt.parse(), hopt, delta, seed, budget);
    if (outage_cmd->parsed())
      return cmd_outage(model, nopt.parse(), delta, samples, seed, threshold,
                        budget);
    if (mac_map->parsed())
      return cmd_mac_map(map_n, grid, out_path,
                         format == "csv" ? "csv" : "pgm", q1, q2);
    if (bounds_cmd->parsed()) return cmd_bounds(nopt.parse(), hopt);
    if (dof->parsed())
      return cmd_dof_table(n_min, n_max, delta, samples, seed,
                           format == "json" ? "json" : "csv");
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return 3;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
