#include "normsol/one_dim.hpp"

#include <algorithm>
#include <cmath>

#include "normsol/ground_state.hpp"

namespace normsol {

namespace {

TranslationLandmarks translation_landmarks(const Problem& pb, const DiscreteReference& ref, double r, int points) {
  TranslationLandmarks T;
  T.m_h = ref.m_h;
  T.two_minus_s_m_h = ref.two_minus_s_m_h;
  T.eta = ref.eta;
  auto E = [&](double y) { return pb.ef->total_energy(project_mass(soliton_field(pb, pb.w, {y, 0, 0}), pb.params.rho)); };
  T.A = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < points; ++k) T.A = std::max(T.A, E(-r + 2 * r * k / (points - 1)));
  T.L = std::max(E(-r), E(r));
  C0Options co;
  co.include_asymmetric = false;
  T.C0 = estimate_C0(pb, nullptr, r, co).value;
  const double m3 = 3 * ref.eta;
  const double mg[4] = {T.L - T.m_h, T.C0 - T.L, T.A - T.C0, T.two_minus_s_m_h - T.A};
  const char* names[4] = {"m < L_r", "L_r < C0", "C0 <= A_r", "A_r < 2^-s m"};
  T.ordering_ok = true;
  for (int k = 0; k < 4; ++k) {
    const bool ok = k == 2 ? mg[k] >= -m3 : mg[k] > m3;
    if (!ok) {
      T.ordering_ok = false;
      if (!T.failed.empty()) T.failed += "; ";
      T.failed += names[k];
    }
  }
  return T;
}

}  // namespace

OneDimReport one_dim_suite(const OneDimConfig& cfg) {
  OneDimReport rep;
  const ModelParams mp{1, cfg.p, cfg.rho};
  auto mn = normalize_to_mass(1, cfg.p, cfg.rho);
  const RadialProfile& w = mn.profile;
  const double lam = mn.lambda_infty, ell = 1.0 / std::sqrt(lam);
  rep.lambda_infty = lam;
  const auto unit = normalize_to_mass(1, cfg.p, 1.0);
  rep.threshold_L = smallness_threshold_wholespace(q_infinity, mp, unit.profile).L;
  rep.epsilon = cfg.epsilon_fraction * rep.threshold_L;

  GridSpec line;
  line.h = cfg.h * ell;
  line.half_width = cfg.half_width * ell;
  GridSpec half;
  half.h = cfg.h * ell;
  half.x_max = cfg.x_max * ell;
  ExteriorDomainSpec whole;
  ExteriorDomainSpec wall;
  wall.cutoff_R = ell;  // length of the cutoff ramp next to the wall

  PotentialSpec gauss;
  gauss.form = PotentialForm::gaussian;
  gauss.amplitude = rep.epsilon;
  gauss.rate = cfg.v_rate * lam;

  auto run = [&](const std::string& name, const Problem& pb, double seed_at, bool pin, bool expect) {
    OneDimCase c;
    c.name = name;
    c.expect_accept = expect;
    const auto ref = discrete_reference(pb);
    SolveOptions so = cfg.solve;
    so.descent.pin_translations = pin;
    const GridField seed = project_mass(soliton_field(pb, pb.w, {seed_at, 0, 0}), cfg.rho);
    c.solve = saddle_search(pb, seed, Window::from(ref), so);
    return c;
  };

  // V = 0 on the line: the explicit soliton
  {
    auto pb = make_problem(mp, whole, PotentialSpec{}, line, Backend::parallel, &w);
    OneDimCase c = run("line-zero-V", *pb, 0.0, false, false);
    double err = 0, amp = 0;
    const Lattice& L = *pb->lat;
    for (std::size_t i = 0; i < L.size(); ++i) {
      const double ex = sech_soliton(L.position(i)[0], cfg.p, lam);
      err = std::max(err, std::abs(c.solve.u_bar.v[i] - ex));
      amp = std::max(amp, ex);
    }
    c.soliton_error = err / amp;
    c.outcome_ok = c.solve.converged && c.soliton_error < 1e-3;
    rep.cases.push_back(std::move(c));
  }
  // small gaussian hill on the line
  {
    auto pb = make_problem(mp, whole, gauss, line, Backend::parallel, &w);
    rep.landmarks = translation_landmarks(*pb, discrete_reference(*pb), cfg.r * ell, cfg.path_points);
    OneDimCase c = run("line-small-V", *pb, 0.0, false, true);
    c.outcome_ok = c.solve.accepted;
    rep.cases.push_back(std::move(c));
  }
  // half-line without potential: no solution, the iterate walks away from the wall
  {
    auto pb = make_problem(mp, wall, PotentialSpec{}, half, Backend::parallel, &w);
    OneDimCase c = run("half-line-zero-V", *pb, cfg.wall_seed * ell, false, false);
    c.outcome_ok = !c.solve.accepted && c.solve.label.rfind("escape", 0) == 0;
    rep.cases.push_back(std::move(c));
  }
  // half-line with the hill moved away from the wall
  const double largest = cfg.shifts.empty() ? 0.0 : *std::max_element(cfg.shifts.begin(), cfg.shifts.end());
  for (double R : cfg.shifts) {
    PotentialSpec V = gauss;
    V.center = {R * ell};
    auto pb = make_problem(mp, wall, V, half, Backend::parallel, &w);
    OneDimCase c = run("half-line-shifted-V", *pb, R * ell, true, R == largest);
    c.shift = R;
    c.outcome_ok = R == largest ? c.solve.accepted : true;
    rep.cases.push_back(std::move(c));
  }
  // monotone potential on the line: no solution
  {
    PotentialSpec V;
    V.form = PotentialForm::step;
    V.amplitude = rep.epsilon;
    V.rate = 1.0 / ell;
    auto pb = make_problem(mp, whole, V, line, Backend::parallel, &w);
    OneDimCase c = run("line-monotone-V", *pb, 0.0, false, false);
    c.outcome_ok = !c.solve.accepted;
    rep.cases.push_back(std::move(c));
  }
  rep.ok = std::all_of(rep.cases.begin(), rep.cases.end(), [](const OneDimCase& c) { return c.outcome_ok; });
  return rep;
}

}  // namespace normsol
