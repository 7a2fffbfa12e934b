// Acceptance suite: one PASS/FAIL line per criterion.
#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "normsol/domain_potential.hpp"
#include "normsol/ground_state.hpp"
#include "normsol/interaction.hpp"
#include "normsol/minmax.hpp"
#include "normsol/one_dim.hpp"
#include "normsol/saddle.hpp"
#include "normsol/scaling_laws.hpp"

using namespace normsol;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

int failures = 0;

void run(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), sec);
  std::fflush(stdout);
}

const std::vector<std::pair<int, double>> kNP{{1, 4.0}, {2, 3.0}, {3, 3.0}};
const std::vector<double> kK{0.25, 0.5, 0.75};

// shared by criteria 7 and 8
struct Exterior {
  std::shared_ptr<Problem> pb;
  DiscreteReference ref;
  std::vector<TestSurface> surfaces;
  std::vector<Witness> witnesses;
  std::vector<MinMaxReport> reports;
  C0Estimate c0;
  int chosen = -1;
} ext;

}  // namespace

int main() {
  std::printf("acceptance suite\n");

  run(1, "soliton oracle", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const RadialProfile w = shoot_radial(1, 4.0, 1.0);
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    double err = 0;
    for (std::size_t i = 0; i < w.r_grid.size(); ++i)
      err = std::max(err, std::abs(w.values[i] - std::sqrt(2.0) / std::cosh(w.r_grid[i])));
    const double lam = (w.p_norm - w.grad_sq) / w.mass_sq;
    const bool ok = err < 1e-8 && std::abs(w.mass_sq - 4) < 1e-8 && std::abs(w.energy + 2.0 / 3) < 1e-8 &&
                    std::abs(lam - 1) < 1e-8 && sec < 1.0;
    return Outcome{ok, fmt("sup err %.2e, mass^2-4 %.2e, E+2/3 %.2e, lambda-1 %.2e, shoot %.3f s", err, w.mass_sq - 4,
                           w.energy + 2.0 / 3, lam - 1, sec)};
  });

  run(2, "scaling laws", [] {
    double worst_e = 0, worst_l = 0, worst_u = 0;
    for (auto [N, p] : kNP) {
      const RadialProfile base = shoot_radial(N, p, 1.0);
      const double s = compute_exponents(N, p).s;
      for (double k : kK) {
        const RadialProfile sc = scaled_profile(base, k);
        const RadialProfile direct = shoot_radial(N, p, std::pow(k, s));
        worst_e = std::max({worst_e, rel(sc.energy, std::pow(k, 1 + s) * base.energy),
                            rel(direct.energy, std::pow(k, 1 + s) * base.energy)});
        worst_l = std::max({worst_l, rel(sc.lambda, std::pow(k, s)), rel(direct.lambda, std::pow(k, s))});
        double d = 0;
        for (std::size_t i = 0; i < direct.r_grid.size(); ++i)
          d = std::max(d, std::abs(sc.value(direct.r_grid[i]) - direct.values[i]));
        worst_u = std::max(worst_u, d / direct.values[0]);
      }
    }
    const bool ok = worst_e < 1e-6 && worst_l < 1e-6 && worst_u < 1e-6;
    return Outcome{ok, fmt("max rel: energy %.2e, multiplier %.2e, profile sup %.2e", worst_e, worst_l, worst_u)};
  });

  run(3, "identities", [] {
    double worst = 0, one_s = 0;
    for (auto [N, p] : kNP) {
      const RadialProfile base = shoot_radial(N, p, 1.0);
      const auto sc = compute_exponents(N, p);
      one_s = std::max(one_s, std::abs(sc.one_plus_s - sc.one_plus_s_alt));
      std::vector<RadialProfile> all{base};
      for (double k : kK) all.push_back(shoot_radial(N, p, std::pow(k, sc.s)));
      for (const auto& w : all) {
        const auto r = pohozaev_nehari_residuals(w);
        const auto mi = multiplier_identity(w);
        worst = std::max({worst, std::abs(r.energy_res) / r.scale, std::abs(r.nehari_res) / r.scale,
                          std::abs(r.pohozaev_res) / r.scale, mi.rel, mi.rel_mass});
      }
    }
    return Outcome{worst < 1e-6 && one_s < 1e-12,
                   fmt("max rel residual %.2e over 12 solitons, |1+s identity| %.2e", worst, one_s)};
  });

  run(4, "inequality suites", [] {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> U(0, 1);
    double slack = 1e300;
    for (int i = 0; i < 10000; ++i) {
      const double a = std::pow(10.0, -3 + 6 * U(rng)), b = std::pow(10.0, -3 + 6 * U(rng));
      const double p = 2 + 4 * U(rng);
      slack = std::min(slack, elementary_power_inequality(a, b, p));
    }
    bool weighted = true, conc = true;
    for (int i = 0; i <= 100; ++i)
      for (int j = 1; j <= 100; ++j) {
        const double s = 4.0 * j / 100;
        weighted = weighted && splitting_inequalities(i / 300.0, s).ok_weighted;
        conc = conc && splitting_inequalities(3 * i / 300.0, s).ok_concavity;
      }
    // t^{1+s} + (1-t)^{1+s} is convex; its extremum at 1/2 is the top of m (t^{1+s} + (1-t)^{1+s}), m < 0
    double worst = 0, where = 0;
    for (int j = 1; j <= 40; ++j) {
      const double s = 0.1 * j;
      auto f = [s](double t) { return split_energy_factor(t, s); };
      const auto [tm, v] = boost::math::tools::brent_find_minima(f, 0.0, 1.0, 60);
      worst = std::max({worst, std::abs(v - std::pow(2.0, -s)), std::abs(f(0.5) - std::pow(2.0, -s))});
      where = std::max(where, std::abs(tm - 0.5));
    }
    const bool ok = slack >= -1e-12 && weighted && conc && worst < 1e-10 && where < 1e-6;
    return Outcome{ok, fmt("power slack min %.2e, weighted split %s, concavity %s, split extremum err %.2e at |t-1/2| %.1e",
                           slack, weighted ? "holds" : "fails", conc ? "holds" : "fails", worst, where)};
  });

  run(5, "decay constants", [] {
    double spread = 0, ratio = 0;
    for (auto [N, p] : kNP) {
      const RadialProfile base = shoot_radial(N, p, 1.0);
      const double s = compute_exponents(N, p).s;
      const DecayFit f1 = fit_decay_constant(base);
      spread = std::max(spread, f1.spread);
      for (double k : {0.25, 0.5}) {
        const DecayFit fk = fit_decay_constant(shoot_radial(N, p, std::pow(k, s)));
        spread = std::max(spread, fk.spread);
        const double pred = std::pow(k, s * (1 / (p - 2) - (N - 1) / 4.0));
        ratio = std::max(ratio, rel(fk.c1 / f1.c1, pred));
      }
    }
    return Outcome{spread < 0.01 && ratio < 0.01, fmt("max plateau spread %.2e, max c_k/c_1 rel err %.2e", spread, ratio)};
  });

  run(6, "interaction asymptotics", [] {
    const RadialProfile base = shoot_radial(2, 3.0, 1.0);
    const double rho = std::sqrt(base.mass_sq);
    const BumpPair bp = make_bump_pair(base, rho, 0.3);
    const double c1t = limit_constants(bp).c1t;
    std::vector<double> dev;
    std::string rs;
    for (double r : {16.0, 20.0, 24.0}) {
      const auto e = interaction_estimate(r, bp, {-1, 0});
      dev.push_back(std::abs(e.ratio_tau / c1t - 1));
      rs += fmt(" %.4f%%", 100 * dev.back());
    }
    const bool mono = dev[0] > dev[1] && dev[1] > dev[2];
    std::vector<double> g;
    for (double t : {0.40, 0.42, 0.44, 0.46, 0.48, 0.49, 0.495, 0.499})
      g.push_back(limit_constants(make_bump_pair(base, rho, t)).c1t * (0.5 - t));
    std::vector<double> sorted = g;
    std::sort(sorted.begin(), sorted.end());
    const double med = 0.5 * (sorted[3] + sorted[4]);
    const double gmax = sorted.back();
    const bool ok = *std::max_element(dev.begin(), dev.end()) < 0.02 && mono && gmax <= 2 * med;
    return Outcome{ok, fmt("tau/delta vs c_1t at r=16,20,24:%s, monotone %s, max c_1t(1/2-t)/median %.3f", rs.c_str(),
                           mono ? "yes" : "no", gmax / med)};
  });

  run(7, "landmark ordering", [] {
    const ModelParams mp{2, 3.0, 1.0};
    ExteriorDomainSpec dom;
    dom.obstacle_radius = 1.0;
    dom.cutoff_R = 12.0;
    GridSpec g;
    g.h = 0.5;
    g.half_width = 100;
    ext.pb = make_problem(mp, dom, PotentialSpec{}, g);
    ext.ref = discrete_reference(*ext.pb);
    SurfaceOptions so;
    so.sigma_points = 32;
    so.t_points = 11;
    const std::vector<double> rs{8, 12, 16, 20};
    for (double r : rs) {
      ext.surfaces.push_back(build_surface(r, ext.pb, so));
      ext.witnesses.push_back(find_zero_barycenter(ext.surfaces.back()));
    }
    // C0 does not depend on r; the witness of the widest surface is the extra start
    C0Options co;
    co.max_iter = 600;
    co.include_dipole = false;
    co.include_asymmetric = false;
    const GridField wf = ext.surfaces.back().field(ext.witnesses.back().t, ext.witnesses.back().z);
    ext.c0 = estimate_C0(*ext.pb, ext.witnesses.back().found ? &wf : nullptr, rs.back(), co);
    std::string d;
    const double am = std::abs(ext.ref.m);
    for (std::size_t k = 0; k < rs.size(); ++k) {
      ext.reports.push_back(landmarks(ext.surfaces[k], ext.ref, ext.c0.value));
      const auto& R = ext.reports.back();
      if (R.ordering_ok) ext.chosen = static_cast<int>(k);
      d += fmt(" r=%g:%s", rs[k], R.ordering_ok ? "ok" : ("[" + R.failed + "]").c_str());
    }
    const auto& R = ext.reports[ext.chosen >= 0 ? ext.chosen : rs.size() - 1];
    d += fmt("; at r=%g (units |m|): m_h %.7f L %.7f C0 %.7f A %.7f 2^-s m_h %.7f, min margin/eta %.1f", R.r,
             R.m_h / am, R.L_r.value / am, R.C0 / am, R.A_r.value / am, R.two_minus_s_m_h / am,
             *std::min_element(R.margins.begin(), R.margins.end()) / R.eta);
    return Outcome{ext.chosen >= 0, d};
  });

  run(8, "bound state", [] {
    if (!ext.pb) return Outcome{false, "no exterior problem"};
    const int k = ext.chosen >= 0 ? ext.chosen : static_cast<int>(ext.surfaces.size()) - 1;
    const Witness& W = ext.witnesses[k];
    if (!W.found) return Outcome{false, "no beta = 0 witness"};
    const auto t0 = std::chrono::steady_clock::now();
    const GridField seed = ext.surfaces[k].field(W.t, W.z);
    const SolveReport S = saddle_search(*ext.pb, seed, Window::from(ext.ref));
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const int cells = ext.pb->lat->n[0] - 1;
    const bool ok = S.converged && S.residual_norm < 1e-5 && S.in_window && S.lambda > 0 && S.positive &&
                    cells >= 128 && sec < 600;
    return Outcome{ok, fmt("%s, residual %.2e, E/|m| %.7f in (%.7f, %.7f), lambda %.6f, positive %s, %d cells/axis, "
                           "solve %.1f s",
                           S.label.c_str(), S.residual_norm, S.energy / std::abs(ext.ref.m),
                           S.window.lo / std::abs(ext.ref.m), S.window.hi / std::abs(ext.ref.m), S.lambda,
                           S.positive ? "yes" : "no", cells, sec)};
  });

  run(9, "smallness thresholds", [] {
    const ModelParams unit{3, 3.0, 1.0};
    const RadialProfile w1 = normalize_to_mass(3, 3.0, 1.0).profile;
    const std::vector<double> rhos{0.5, 1, 2, 4};
    std::vector<double> crit, sup, two;
    for (double rho : rhos) {
      ModelParams mp = unit;
      mp.rho = rho;
      crit.push_back(smallness_threshold_wholespace(1.5, mp, w1).L);
      two.push_back(smallness_threshold_wholespace(2.0, mp, w1).L);
      sup.push_back(smallness_threshold_wholespace(q_infinity, mp, w1).L);
    }
    double spread = 0;
    bool inc = true;
    for (std::size_t i = 0; i < rhos.size(); ++i) {
      spread = std::max(spread, rel(crit[i], crit[0]));
      if (i > 0) inc = inc && two[i] > two[i - 1] && sup[i] > sup[i - 1];
    }
    return Outcome{spread < 1e-10 && inc,
                   fmt("N=3 p=3: L(3/2) spread %.2e (L=%.8f); L(2), L(inf) increasing %s", spread, crit[0],
                       inc ? "yes" : "no")};
  });

  run(10, "non-compactness witnesses", [] {
    GridSpec g;
    g.h = 0.5;
    g.half_width = 100;
    auto pb = make_problem(ModelParams{2, 3.0, 1.0}, ExteriorDomainSpec{}, PotentialSpec{}, g);
    const auto two = two_bump_sequence(*pb, {4, 5, 6, 7, 8});
    const auto tr = translated_sequence(*pb, {0, 2, 4, 6});
    auto line = [](const SequenceWitness& s) {
      return fmt("%s dev %.2e bound %.2e (%.3f%%) label %s", s.name.c_str(), s.deviation, s.bound,
                 100 * s.bound / std::abs(s.target), to_string(s.escape.label).c_str());
    };
    return Outcome{two.ok && tr.ok, line(two) + "; " + line(tr)};
  });

  run(11, "barycenter properties", [] {
    const double h = 0.25;
    auto lat = Lattice::box(2, 24, h, 2);
    const BallStencil ball = BallStencil::build(*lat);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> U(0, 1);
    double e2 = 0, e3 = 0, e4 = 0;
    for (int n = 0; n < 100; ++n) {
      const double width = 0.7 + 2.3 * U(rng);
      const double amp = (U(rng) < 0.5 ? -1 : 1) * std::pow(10.0, -2 + 4 * U(rng));
      const double tscale = (U(rng) < 0.5 ? -1 : 1) * std::pow(10.0, -2 + 4 * U(rng));
      const std::array<double, 3> z{-8 + 16 * U(rng), -8 + 16 * U(rng), 0};
      const bool sech = n % 2 == 0;
      auto f = [&](double r) { return amp * (sech ? 1 / std::cosh(r / width) : std::exp(-r * r / (width * width))); };
      const GridField u0 = sample_field(lat, [&](const std::array<double, 3>& x) { return f(std::hypot(x[0], x[1])); });
      const GridField uz =
          sample_field(lat, [&](const std::array<double, 3>& x) { return f(std::hypot(x[0] - z[0], x[1] - z[1])); });
      GridField ut = uz;
      for (double& v : ut.v) v *= tscale;
      const auto b0 = barycenter(u0, ball).beta, bz = barycenter(uz, ball).beta, bt = barycenter(ut, ball).beta;
      e2 = std::max(e2, std::hypot(b0[0], b0[1]));
      e3 = std::max(e3, std::hypot(bt[0] - bz[0], bt[1] - bz[1]));
      e4 = std::max(e4, std::hypot(bz[0] - b0[0] - z[0], bz[1] - b0[1] - z[1]));
    }
    return Outcome{e2 <= 2 * h && e3 <= 2 * h && e4 <= 2 * h,
                   fmt("max errors over 100 fields (h=%g): radial %.2e, scaling %.2e, translation %.2e", h, e2, e3, e4)};
  });

  run(12, "one-dimensional suite", [] {
    const OneDimReport R = one_dim_suite(OneDimConfig{});
    std::string d;
    bool small = false, wall = false, shifted = false;
    for (const auto& c : R.cases) {
      d += fmt(" %s%s:%s", c.name.c_str(), c.shift > 0 ? fmt("(R=%g)", c.shift).c_str() : "", c.solve.label.c_str());
      if (c.name == "line-small-V") small = c.solve.accepted && c.solve.positive;
      if (c.name == "half-line-zero-V") wall = !c.solve.accepted && c.solve.label.rfind("escape", 0) == 0;
      if (c.name == "half-line-shifted-V" && c.expect_accept) shifted = c.solve.accepted && c.solve.positive;
    }
    return Outcome{small && wall && shifted && R.ok, d.substr(1)};
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
