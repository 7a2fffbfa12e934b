#include "normsol/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

namespace normsol {

namespace {

json vec(const std::array<double, 3>& a, int N) {
  json j = json::array();
  for (int i = 0; i < N; ++i) j.push_back(a[i]);
  return j;
}

json point(const SurfacePoint& p, int N) { return {{"value", p.value}, {"t", p.t}, {"z", vec(p.z, N)}}; }

}  // namespace

json to_json(const Tolerances& t) {
  return {{"identity", t.identity}, {"scaling", t.scaling}, {"decay", t.decay},     {"interaction", t.interaction},
          {"solve", t.solve},       {"newton", t.newton},   {"drift", t.drift},     {"scale", t.scale}};
}

json to_json(const MinMaxReport& r) {
  const int N = 3;
  return {{"r", r.r},
          {"m", r.m},
          {"two_minus_s_m", r.two_minus_s_m},
          {"m_h", r.m_h},
          {"two_minus_s_m_h", r.two_minus_s_m_h},
          {"eta", r.eta},
          {"L_r", point(r.L_r, N)},
          {"A_r", point(r.A_r, N)},
          {"C0", r.C0},
          {"margins", r.margins},
          {"ordering_ok", r.ordering_ok},
          {"failed", r.failed}};
}

json to_json(const EscapeReport& e) {
  json stats = json::array();
  for (const auto& s : e.stats)
    stats.push_back({{"energy", s.energy},
                     {"com", s.com},
                     {"two_bumps", s.two_bumps},
                     {"f1", s.f1},
                     {"f2", s.f2},
                     {"separation", s.separation},
                     {"beta_norm", s.beta_norm}});
  return {{"label", to_string(e.label)},
          {"level", e.level},
          {"drift", e.drift},
          {"separation_growth", e.separation_growth},
          {"snapshots", stats}};
}

json to_json(const SolveReport& r) {
  json hist = json::array();
  for (const auto& h : r.history) hist.push_back({h.iter, h.energy, h.residual, h.lambda});
  return {{"label", r.label},
          {"accepted", r.accepted},
          {"converged", r.converged},
          {"lambda", r.lambda},
          {"lambda_identity", r.lambda_identity},
          {"identity_rel", r.identity_rel},
          {"energy", r.energy},
          {"residual_norm", r.residual_norm},
          {"sign_class", to_string(r.sign.cls)},
          {"positive", r.positive},
          {"in_window", r.in_window},
          {"window", {r.window.lo, r.window.hi}},
          {"iterations", r.iterations},
          {"newton_steps", r.newton_steps},
          {"drift", r.drift},
          {"beta_seed", r.beta_seed},
          {"beta_final", r.beta_final},
          {"escape", to_json(r.escape)},
          {"history", hist}};
}

json to_json(const Witness& w) {
  return {{"found", w.found},   {"t", w.t},           {"z", w.z},          {"beta", w.beta},
          {"beta_norm", w.beta_norm}, {"energy", w.energy}, {"degree", w.degree}, {"method", w.method}};
}

json to_json(const C0Estimate& c) {
  json starts = json::array();
  for (const auto& s : c.starts)
    starts.push_back({{"name", s.name},
                      {"value", s.value},
                      {"beta_norm", s.beta_norm},
                      {"feasible", s.feasible},
                      {"converged", s.converged},
                      {"iterations", s.iterations}});
  return {{"value", c.value}, {"best_start", c.best_start}, {"converged", c.converged}, {"starts", starts}};
}

json to_json(const OneDimReport& r) {
  json cases = json::array();
  for (const auto& c : r.cases) {
    json s = to_json(c.solve);
    s.erase("history");
    cases.push_back({{"name", c.name},
                     {"shift", c.shift},
                     {"expect_accept", c.expect_accept},
                     {"soliton_error", c.soliton_error},
                     {"outcome_ok", c.outcome_ok},
                     {"solve", s}});
  }
  const auto& L = r.landmarks;
  return {{"lambda_infty", r.lambda_infty},
          {"threshold_L", r.threshold_L},
          {"epsilon", r.epsilon},
          {"landmarks",
           {{"A", L.A}, {"L", L.L}, {"C0", L.C0}, {"m_h", L.m_h}, {"two_minus_s_m_h", L.two_minus_s_m_h},
            {"eta", L.eta}, {"ordering_ok", L.ordering_ok}, {"failed", L.failed}}},
          {"cases", cases},
          {"ok", r.ok}};
}

ReportSink::ReportSink(const std::string& dir, const ExperimentConfig& cfg)
    : dir_(dir), hash_(cfg.hash_hex()), tol_(to_json(cfg.tol)) {
  std::filesystem::create_directories(dir_);
  out_.open(dir_ + "/reports.jsonl", std::ios::trunc);
  if (!out_) throw std::runtime_error("cannot write to " + dir_);
}

void ReportSink::emit(const std::string& kind, json body) {
  json rec;
  rec["kind"] = kind;
  rec["config_hash"] = hash_;
  rec["tolerances"] = tol_;
  rec["body"] = std::move(body);
  out_ << rec.dump() << '\n';
  out_.flush();
}

void write_energy_csv(const std::string& path, const TestSurface& S) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "t,z_index,z1,z2,z3,energy,beta1,beta2,beta3\n";
  char buf[512];
  for (std::size_t i = 0; i < S.t_grid.size(); ++i)
    for (std::size_t j = 0; j < S.sigma.z.size(); ++j) {
      const auto& z = S.sigma.z[j];
      const auto& b = S.beta[i][j];
      std::snprintf(buf, sizeof buf, "%.6f,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", S.t_grid[i], j, z[0], z[1],
                    z[2], S.energy[i][j], b[0], b[1], b[2]);
      os << buf;
    }
}

void write_surface_svg(const std::string& path, const TestSurface& S, const MinMaxReport* rep, const Witness* w) {
  const std::size_t nt = S.t_grid.size(), nz = S.sigma.z.size();
  double lo = S.energy[0][0], hi = lo;
  for (const auto& row : S.energy)
    for (double e : row) {
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
  const double W = 640, H = 400, ml = 60, mr = 110, mt = 30, mb = 50;
  const double cw = (W - ml - mr) / nz, ch = (H - mt - mb) / nt;
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  char buf[256];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"18\">E over (z, t), r = %g</text>\n", ml, S.r);
  os << buf;
  // blue (low) to yellow (high)
  auto colour = [&](double e) {
    const double f = hi > lo ? (e - lo) / (hi - lo) : 0.5;
    const int r = static_cast<int>(40 + 215 * f), g = static_cast<int>(40 + 180 * f),
              b = static_cast<int>(160 - 120 * f);
    std::snprintf(buf, sizeof buf, "rgb(%d,%d,%d)", r, g, b);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = 0; j < nz; ++j) {
      const double x = ml + j * cw, y = H - mb - (i + 1) * ch;
      std::snprintf(buf, sizeof buf, "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"", x, y,
                    cw + 0.3, ch + 0.3);
      os << buf << colour(S.energy[i][j]) << "\"/>\n";
    }
  auto mark = [&](double t, double jz, const char* stroke, const char* label) {
    const double x = ml + (jz + 0.5) * cw, y = H - mb - (t * (nt - 1) + 0.5) * ch;
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"5\" fill=\"none\" stroke=\"%s\" stroke-width=\"2\"/>"
                  "<text x=\"%.2f\" y=\"%.2f\" fill=\"%s\">%s</text>\n",
                  x, y, stroke, x + 7, y - 7, stroke, label);
    os << buf;
  };
  auto z_index = [&](const std::array<double, 3>& z) {
    std::size_t best = 0;
    double bd = 1e300;
    for (std::size_t j = 0; j < nz; ++j) {
      double d = 0;
      for (int a = 0; a < 3; ++a) d += (S.sigma.z[j][a] - z[a]) * (S.sigma.z[j][a] - z[a]);
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    return static_cast<double>(best);
  };
  if (rep) {
    mark(rep->A_r.t, z_index(rep->A_r.z), "#c00000", "A_r");
    mark(1.0, z_index(rep->L_r.z), "#006000", "L_r");
  }
  if (w && w->found) mark(w->t, z_index(w->z), "#ffffff", "beta=0");
  std::snprintf(buf, sizeof buf,
                "<text x=\"%g\" y=\"%g\">z index (0..%zu)</text>\n"
                "<text x=\"14\" y=\"%g\" transform=\"rotate(-90 14 %g)\">t</text>\n",
                ml + 0.4 * (W - ml - mr), H - 15, nz - 1, H / 2, H / 2);
  os << buf;
  // colour bar
  const double bx = W - mr + 20;
  for (int k = 0; k < 50; ++k) {
    const double e = lo + (hi - lo) * k / 49.0;
    std::snprintf(buf, sizeof buf, "<rect x=\"%g\" y=\"%.2f\" width=\"18\" height=\"%.2f\" fill=\"", bx,
                  H - mb - (k + 1) * (H - mt - mb) / 50, (H - mt - mb) / 50 + 0.3);
    os << buf << colour(e) << "\"/>\n";
  }
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\">%.4g</text><text x=\"%g\" y=\"%g\">%.4g</text>\n", bx + 22,
                H - mb, lo, bx + 22, mt + 8, hi);
  os << buf << "</svg>\n";
}

}  // namespace normsol
