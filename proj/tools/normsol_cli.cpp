// normsol: run one experiment suite from a config file.
#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "normsol/config.hpp"
#include "normsol/ground_state.hpp"
#include "normsol/interaction.hpp"
#include "normsol/minmax.hpp"
#include "normsol/one_dim.hpp"
#include "normsol/report.hpp"
#include "normsol/saddle.hpp"
#include "normsol/scaling_laws.hpp"

using namespace normsol;

namespace {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

using Checks = std::vector<Check>;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string num(double v, const char* f = "%.3e") {
  char b[32];
  std::snprintf(b, sizeof b, f, v);
  return b;
}

struct Context {
  ExperimentConfig cfg;
  ReportSink* sink = nullptr;
  std::string path(const std::string& name) const { return sink->dir() + "/" + name; }
};

// ---- ground state ---------------------------------------------------------

Checks ground_state(Context& cx) {
  const auto& c = cx.cfg;
  const auto& t = c.tol;
  const int N = c.params.N;
  const double p = c.params.p;
  Checks out;
  const RadialProfile unit_lambda = shoot_radial(N, p, 1.0);
  const MassNormalized mn = normalize_to_mass(N, p, c.params.rho);
  const RadialProfile& w = mn.profile;

  double worst = 0;
  for (const RadialProfile* v : {&unit_lambda, &w}) {
    const auto r = pohozaev_nehari_residuals(*v);
    const auto mi = multiplier_identity(*v);
    worst = std::max({worst, std::abs(r.energy_res) / r.scale, std::abs(r.nehari_res) / r.scale,
                      std::abs(r.pohozaev_res) / r.scale, mi.rel, mi.rel_mass});
  }
  out.push_back({"identities", worst < t.identity, "max rel residual " + num(worst)});

  if (N == 1) {
    double err = 0;
    for (std::size_t i = 0; i < unit_lambda.r_grid.size(); ++i)
      err = std::max(err, std::abs(unit_lambda.values[i] - sech_soliton(unit_lambda.r_grid[i], p, 1.0)));
    err /= unit_lambda.values[0];
    out.push_back({"sech oracle", err < t.identity, "sup rel error " + num(err)});
  }

  // multiplier at mass rho^2 against (rho^2)^s lambda_1
  const auto sc = compute_exponents(N, p);
  const double lam_pred = std::pow(c.params.rho * c.params.rho / unit_lambda.mass_sq, sc.s);
  const double lr = rel(mn.lambda_infty, lam_pred);
  out.push_back({"multiplier scaling", lr < t.scaling, "rel " + num(lr)});

  const DecayFit f = fit_decay_constant(w);
  out.push_back({"decay plateau", f.spread < t.decay, "spread " + num(f.spread)});

  json th = json::array();
  const RadialProfile w1 = normalize_to_mass(N, p, 1.0).profile;
  for (double q : {0.5 * N, 2.0, q_infinity}) {
    if (!q_admissible(q, N)) continue;
    const Threshold T = smallness_threshold_wholespace(q, c.params, w1);
    th.push_back({{"q", std::isinf(q) ? json("inf") : json(q)}, {"L", T.L}, {"L_power_law", T.L_power_law}});
  }
  json V = nullptr;
  if (!c.potential.is_zero() && q_admissible(c.potential.q, N)) {
    try {
      const double vq = lq_norm(c.potential, c.potential.q, N);
      const double L = smallness_threshold_wholespace(c.potential.q, c.params, w1).L;
      V = {{"q", c.potential.q}, {"norm", vq}, {"threshold", L}, {"small", vq < L}};
    } catch (const PotentialError&) {
    }
  }
  cx.sink->emit("ground_state", {{"N", N},
                                 {"p", p},
                                 {"rho", c.params.rho},
                                 {"lambda_infty", mn.lambda_infty},
                                 {"m", w.energy},
                                 {"mass_sq", w.mass_sq},
                                 {"c_decay", w.c_decay},
                                 {"decay_spread", f.spread},
                                 {"s", sc.s},
                                 {"thresholds", th},
                                 {"potential", V}});
  std::ofstream os(cx.path("profile.csv"));
  os << "r,w,dw\n";
  os.precision(17);
  for (std::size_t i = 0; i < w.r_grid.size(); ++i) os << w.r_grid[i] << ',' << w.values[i] << ',' << w.derivs[i] << '\n';
  return out;
}

// ---- scaling laws, decay ratios, elementary inequalities --------------------

Checks scaling_check(Context& cx) {
  const auto& c = cx.cfg;
  const int N = c.params.N;
  const double p = c.params.p;
  const double s = compute_exponents(N, p).s;
  Checks out;
  const RadialProfile base = shoot_radial(N, p, 1.0);
  const DecayFit f1 = fit_decay_constant(base);
  double we = 0, wl = 0, wu = 0, wd = 0;
  json rows = json::array();
  for (double k : c.k_values) {
    const RadialProfile sc = scaled_profile(base, k);
    const RadialProfile direct = shoot_radial(N, p, std::pow(k, s));
    const double e = rel(direct.energy, std::pow(k, 1 + s) * base.energy);
    const double l = rel(sc.lambda, direct.lambda);
    double d = 0;
    for (std::size_t i = 0; i < direct.r_grid.size(); ++i)
      d = std::max(d, std::abs(sc.value(direct.r_grid[i]) - direct.values[i]));
    d /= direct.values[0];
    const double ck = fit_decay_constant(direct).c1 / f1.c1;
    const double dk = rel(ck, std::pow(k, s * (1 / (p - 2) - (N - 1) / 4.0)));
    we = std::max(we, e);
    wl = std::max(wl, l);
    wu = std::max(wu, d);
    wd = std::max(wd, dk);
    rows.push_back({{"k", k}, {"energy_rel", e}, {"lambda_rel", l}, {"profile_sup", d}, {"ck_ratio_rel", dk}});
  }
  out.push_back({"scaled energy", we < c.tol.scaling, "max rel " + num(we)});
  out.push_back({"scaled multiplier", wl < c.tol.scaling, "max rel " + num(wl)});
  out.push_back({"scaled profile", wu < c.tol.scaling, "sup " + num(wu)});
  out.push_back({"decay constant ratio", wd < c.tol.decay, "max rel " + num(wd)});

  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> U(0, 1);
  double slack = 1e300;
  for (int i = 0; i < 10000; ++i)
    slack = std::min(slack, elementary_power_inequality(std::pow(10.0, -3 + 6 * U(rng)), std::pow(10.0, -3 + 6 * U(rng)),
                                                        2 + 4 * U(rng)));
  out.push_back({"power inequality", slack >= -1e-12, "min slack " + num(slack)});
  bool g = true, conc = true;
  for (int i = 0; i <= 100; ++i)
    for (int j = 1; j <= 100; ++j) {
      g = g && splitting_inequalities(i / 300.0, 0.04 * j).ok_weighted;
      conc = conc && splitting_inequalities(i / 100.0, 0.04 * j).ok_concavity;
    }
  out.push_back({"splitting inequality", g, g ? "holds on grid" : "violated"});
  out.push_back({"splitting concavity", conc, conc ? "holds on grid" : "violated"});
  auto f = [s](double t) { return split_energy_factor(t, s); };
  const auto [tm, v] = boost::math::tools::brent_find_minima(f, 0.0, 1.0, 60);
  const double se = std::abs(v - std::pow(2.0, -s));
  out.push_back({"split extremum", se < 1e-10 && std::abs(tm - 0.5) < 1e-6, "err " + num(se)});
  cx.sink->emit("scaling_check", {{"N", N}, {"p", p}, {"s", s}, {"rows", rows}, {"power_slack", slack}});
  return out;
}

// ---- interaction asymptotics ----------------------------------------------

Checks interaction(Context& cx) {
  const auto& c = cx.cfg;
  const int N = c.params.N;
  const RadialProfile base = shoot_radial(N, c.params.p, 1.0);
  const double rho = std::sqrt(base.mass_sq);
  const BumpPair bp = make_bump_pair(base, rho, c.interaction_t);
  const double c1t = limit_constants(bp).c1t;
  std::vector<double> z(N, 0.0);
  z[0] = -1;
  std::vector<double> dev;
  std::ofstream os(cx.path("interaction.csv"));
  os << "r,delta,tau,sigma,tau_over_delta,sigma_over_delta,c1t,quad_error\n";
  os.precision(17);
  json rows = json::array();
  for (double r : c.interaction_r) {
    const auto e = interaction_estimate(r, bp, z);
    dev.push_back(std::abs(e.ratio_tau / c1t - 1));
    os << r << ',' << e.delta << ',' << e.tau << ',' << e.sigma << ',' << e.ratio_tau << ',' << e.ratio_sigma << ','
       << c1t << ',' << e.quad_error << '\n';
    rows.push_back({{"r", r}, {"ratio_tau", e.ratio_tau}, {"ratio_sigma", e.ratio_sigma}, {"dev", dev.back()}});
  }
  bool mono = true;
  for (std::size_t i = 1; i < dev.size(); ++i) mono = mono && dev[i] < dev[i - 1];
  std::vector<double> gs;
  for (double t : {0.40, 0.42, 0.44, 0.46, 0.48, 0.49, 0.495, 0.499})
    gs.push_back(limit_constants(make_bump_pair(base, rho, t)).c1t * (0.5 - t));
  std::vector<double> sorted = gs;
  std::sort(sorted.begin(), sorted.end());
  const double med = 0.5 * (sorted[3] + sorted[4]);
  Checks out;
  const double worst = dev.empty() ? 0 : *std::max_element(dev.begin(), dev.end());
  out.push_back({"interaction limit", worst < c.tol.interaction, "max dev " + num(worst)});
  out.push_back({"interaction monotone", mono, mono ? "converging" : "not monotone"});
  out.push_back({"near-half bound", sorted.back() <= 2 * med, "max/median " + num(sorted.back() / med)});
  cx.sink->emit("interaction", {{"t", c.interaction_t}, {"c1t", c1t}, {"rows", rows}, {"near_half", gs}});
  return out;
}

// ---- landmarks and solve ----------------------------------------------------

double auto_half_width(const ExperimentConfig& c, double reach) {
  if (c.grid.half_width > 0) return c.grid.half_width;
  const double ell = 1.0 / std::sqrt(normalize_to_mass(c.params.N, c.params.p, c.params.rho).lambda_infty);
  return std::ceil(reach + 8 * ell);
}

struct LandmarkRun {
  std::shared_ptr<Problem> pb;
  DiscreteReference ref;
  std::vector<TestSurface> surfaces;
  std::vector<Witness> witnesses;
  std::vector<MinMaxReport> reports;
  int chosen = -1;
};

LandmarkRun landmark_run(Context& cx) {
  const auto& c = cx.cfg;
  LandmarkRun L;
  const double rmax = *std::max_element(c.r_values.begin(), c.r_values.end());
  GridSpec g = c.grid;
  g.half_width = auto_half_width(c, 3 * rmax);
  L.pb = make_problem(c.params, c.domain, c.potential, g);
  L.ref = discrete_reference(*L.pb);
  SurfaceOptions so;
  so.sigma_points = c.sigma_points;
  so.t_points = c.t_points;
  for (double r : c.r_values) {
    L.surfaces.push_back(build_surface(r, L.pb, so));
    L.witnesses.push_back(find_zero_barycenter(L.surfaces.back()));
  }
  const std::size_t last = L.surfaces.size() - 1;
  C0Options co;
  co.max_iter = c.c0_max_iter;
  const GridField wf = L.surfaces[last].field(L.witnesses[last].t, L.witnesses[last].z);
  const C0Estimate c0 = estimate_C0(*L.pb, L.witnesses[last].found ? &wf : nullptr, c.r_values[last], co);
  cx.sink->emit("c0_estimate", to_json(c0));
  for (std::size_t k = 0; k < L.surfaces.size(); ++k) {
    L.reports.push_back(landmarks(L.surfaces[k], L.ref, c0.value));
    if (L.reports.back().ordering_ok) L.chosen = static_cast<int>(k);
    char name[64];
    std::snprintf(name, sizeof name, "energy_r%g.csv", c.r_values[k]);
    write_energy_csv(cx.path(name), L.surfaces[k]);
    cx.sink->emit("minmax", {{"report", to_json(L.reports.back())}, {"witness", to_json(L.witnesses[k])},
                             {"obstacle_overlap", L.surfaces[k].obstacle_overlap}});
  }
  const std::size_t k = L.chosen >= 0 ? L.chosen : last;
  write_surface_svg(cx.path("surface.svg"), L.surfaces[k], &L.reports[k], &L.witnesses[k]);
  return L;
}

Checks landmarks_suite(Context& cx) {
  const LandmarkRun L = landmark_run(cx);
  std::string d;
  for (const auto& R : L.reports) d += " r=" + num(R.r, "%g") + (R.ordering_ok ? ":ok" : ":[" + R.failed + "]");
  return {{"landmark ordering", L.chosen >= 0, d.substr(1)}};
}

Checks solve_suite(Context& cx) {
  const LandmarkRun L = landmark_run(cx);
  const std::size_t k = L.chosen >= 0 ? L.chosen : L.surfaces.size() - 1;
  const Witness& W = L.witnesses[k];
  if (!W.found) return {{"bound state", false, "no beta = 0 witness"}};
  SolveOptions so;
  so.tol = cx.cfg.tol.solve;
  so.newton_tol = cx.cfg.tol.newton;
  so.drift_tol = cx.cfg.tol.drift;
  const SolveReport S = saddle_search(*L.pb, L.surfaces[k].field(W.t, W.z), Window::from(L.ref), so);
  cx.sink->emit("solve", to_json(S));
  std::ofstream snap(cx.path("u_bar.bin"), std::ios::binary);
  write_snapshot(snap, S.u_bar);
  std::ofstream slice(cx.path("u_bar_x1.csv"));
  write_csv_slice(slice, S.u_bar, 0);
  return {{"bound state", S.accepted, S.label + ", residual " + num(S.residual_norm) + ", E " + num(S.energy)}};
}

// ---- one-dimensional suite ----------------------------------------------------

Checks one_dim(Context& cx) {
  OneDimConfig o = cx.cfg.one_dim;
  o.solve.tol = cx.cfg.tol.solve;
  o.solve.newton_tol = cx.cfg.tol.newton;
  o.solve.drift_tol = cx.cfg.tol.drift;
  const OneDimReport R = one_dim_suite(o);
  cx.sink->emit("one_dim", to_json(R));
  Checks out;
  for (const auto& c : R.cases) {
    std::string name = c.name;
    if (c.shift > 0) name += " R=" + num(c.shift, "%g");
    out.push_back({name, c.outcome_ok, c.solve.label});
  }
  return out;
}

// ---- non-compactness witnesses on the whole space -----------------------------

Checks sequences(Context& cx) {
  const auto& c = cx.cfg;
  const double ell = 1.0 / std::sqrt(normalize_to_mass(c.params.N, c.params.p, c.params.rho).lambda_infty);
  // on the line the overlap lacks the r^{-(N-1)/2} factor, so the bumps go further out
  const std::vector<double> split = c.params.N == 1 ? std::vector<double>{6, 8, 10, 12} : std::vector<double>{4, 5, 6, 7, 8};
  GridSpec g = c.grid;
  g.x_max = 0;
  g.half_width = auto_half_width(c, (split.back() + 6) * ell);
  auto pb = make_problem(c.params, ExteriorDomainSpec{}, PotentialSpec{}, g);
  Checks out;
  for (const auto& sw : {two_bump_sequence(*pb, split), translated_sequence(*pb, {0, 2, 4, 6})}) {
    cx.sink->emit("sequence", {{"name", sw.name},
                               {"offsets", sw.offsets},
                               {"energies", sw.energies},
                               {"target", sw.target},
                               {"deviation", sw.deviation},
                               {"bound", sw.bound},
                               {"escape", to_json(sw.escape)}});
    out.push_back({sw.name + " sequence", sw.ok,
                   "dev " + num(sw.deviation) + " bound " + num(sw.bound) + " label " + to_string(sw.escape.label)});
  }
  return out;
}

Checks run_suite(Suite s, Context& cx) {
  switch (s) {
    case Suite::ground_state: return ground_state(cx);
    case Suite::scaling_check: return scaling_check(cx);
    case Suite::interaction: return interaction(cx);
    case Suite::landmarks: return landmarks_suite(cx);
    case Suite::solve: return solve_suite(cx);
    case Suite::one_dim: return one_dim(cx);
    case Suite::verify_all: {
      Checks all;
      for (auto* f : {ground_state, scaling_check, interaction, sequences}) {
        auto part = f(cx);
        all.insert(all.end(), part.begin(), part.end());
      }
      return all;
    }
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normalized bound states: experiment runner"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, out_dir;
  int threads = 0;
  double tol_scale = 1.0;
  app.add_option("--config", config_path, "INI config file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides NORMSOL_OUT and the config)");
  app.add_option("--threads", threads, "OpenMP threads (0: runtime default)")->check(CLI::NonNegativeNumber);
  app.add_option("--tol-scale", tol_scale, "multiply every tolerance")->check(CLI::PositiveNumber);
  for (const char* name : {"ground-state", "scaling-check", "interaction", "landmarks", "solve", "one-dim", "verify-all"})
    app.add_subcommand(name, std::string("run the ") + name + " suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  ExperimentConfig cfg;
  try {
    cfg = config_path.empty() ? parse_config("", "<defaults>") : load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << (config_path.empty() ? "<defaults>" : config_path) << ':' << e.line << ": " << e.what() << '\n';
    return 2;
  }
  const Suite suite = parse_suite(app.get_subcommands().front()->get_name());
  cfg.suite = suite;

  Tolerances& t = cfg.tol;
  for (double* v : {&t.identity, &t.scaling, &t.decay, &t.interaction, &t.solve, &t.newton, &t.drift}) *v *= tol_scale;
  t.scale = tol_scale;
  if (const char* env = std::getenv("NORMSOL_OUT"); env && *env) cfg.output_dir = env;
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (threads > 0) omp_set_num_threads(threads);

  try {
    ReportSink sink(cfg.output_dir, cfg);
    Context cx{cfg, &sink};
    const Checks checks = run_suite(suite, cx);
    std::vector<std::string> failed;
    json summary = json::array();
    for (const auto& c : checks) {
      std::printf("%s %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
      summary.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
      if (!c.pass) failed.push_back(c.name);
    }
    sink.emit("summary", {{"suite", to_string(suite)}, {"checks", summary}, {"failed", failed}});
    if (!failed.empty()) {
      std::string list;
      for (const auto& f : failed) list += (list.empty() ? "" : ", ") + f;
      std::fprintf(stderr, "failed criterion: %s\n", list.c_str());
      return 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
