#include <doctest.h>

#include <cmath>

#include "normsol/minmax.hpp"
#include "normsol/saddle.hpp"

using namespace normsol;

namespace {

std::shared_ptr<Problem> plane(double B, double h = 1.0, double obstacle = 0) {
  GridSpec g;
  g.h = h;
  g.half_width = B;
  ExteriorDomainSpec d;
  if (obstacle > 0) {
    d.obstacle_radius = obstacle;
    d.cutoff_R = 8;
  }
  return make_problem(ModelParams{2, 3.0, 1.0}, d, PotentialSpec{}, g);
}

}  // namespace

TEST_CASE("sigma mesh lies on the sphere of radius 2 about e1") {
  for (auto [N, n] : {std::pair{1, 2}, {2, 16}, {3, 40}}) {
    const SigmaMesh S = make_sigma_mesh(N, n);
    CHECK(S.z.size() == static_cast<std::size_t>(n));
    for (const auto& z : S.z) CHECK(std::hypot(z[0] - 1, z[1], z[2]) == doctest::Approx(2.0));
  }
  CHECK(make_sigma_mesh(2, 8).z[4][0] == doctest::Approx(-1.0));
}

TEST_CASE("surface on the plane: t = 0 is one soliton, fields carry mass rho") {
  auto pb = plane(60);
  SurfaceOptions so;
  so.sigma_points = 8;
  so.t_points = 5;
  const TestSurface S = build_surface(12, pb, so);
  for (double e : S.energy[0]) CHECK(e == doctest::Approx(S.energy[0][0]));
  CHECK(std::abs(S.energy[0][0] - pb->w.energy) < 1e-3 * std::abs(pb->w.energy));
  const GridField u = S.field(0.5, S.sigma.z[4]);
  CHECK(grid_mass_sq(u) * pb->lat->cell_volume() == doctest::Approx(1.0).epsilon(1e-12));
  // t = 1/2 opposite e1 sits below 2^{-s} m at this separation
  CHECK(S.energy[2][4] < pb->sc.threshold_factor * pb->w.energy);
}

TEST_CASE("fields vanish on the obstacle") {
  auto pb = plane(40, 0.5, 2.0);
  const GridField u = soliton_field(*pb, pb->w, {0, 0, 0});
  for (std::size_t i = 0; i < u.size(); ++i)
    if (std::hypot(pb->lat->position(i)[0], pb->lat->position(i)[1]) <= 2.0) CHECK(u.v[i] == 0.0);
}

TEST_CASE("witness on a symmetric plane surface is exact on the mesh") {
  auto pb = plane(60);
  SurfaceOptions so;
  so.sigma_points = 8;
  so.t_points = 5;
  const TestSurface S = build_surface(12, pb, so);
  const Witness W = find_zero_barycenter(S);
  CHECK(W.found);
  CHECK(W.beta_norm < pb->lat->h);
  CHECK(W.t == doctest::Approx(0.5));
}

TEST_CASE("escape labels on synthetic sequences") {
  auto pb = plane(80);
  const double ell = pb->decay_length();
  const RadialProfile half = scaled_profile(pb->w, 0.5);
  std::vector<GridField> moving, splitting, still;
  std::vector<double> e;
  for (int k = 0; k < 4; ++k) {
    moving.push_back(soliton_field(*pb, pb->w, {k * ell, 0, 0}, false));
    GridField a = soliton_field(*pb, half, {-(2 + k) * ell, 0, 0}, false);
    const GridField b = soliton_field(*pb, half, {(2 + k) * ell, 0, 0}, false);
    for (std::size_t i = 0; i < a.size(); ++i) a.v[i] += b.v[i];
    splitting.push_back(a);
    still.push_back(soliton_field(*pb, pb->w, {0.1 * k, 0, 0}, false));
    e.push_back(0);
  }
  CHECK(ps_escape_diagnostic(*pb, moving, e).label == EscapeLabel::translation);
  CHECK(ps_escape_diagnostic(*pb, splitting, e).label == EscapeLabel::dichotomy);
  CHECK(ps_escape_diagnostic(*pb, still, e).label == EscapeLabel::compact);
}

TEST_CASE("sequence witnesses reach their levels") {
  auto pb = plane(100, 0.5);
  const auto tb = two_bump_sequence(*pb, {4, 5, 6, 7, 8});
  CHECK(tb.ok);
  CHECK(tb.escape.label == EscapeLabel::dichotomy);
  const auto tr = translated_sequence(*pb, {0, 2, 4});
  CHECK(tr.ok);
  CHECK_THROWS(two_bump_sequence(*plane(40, 1.0, 1.0), {2, 3}));
}

TEST_CASE("descent on the plane settles on the soliton level") {
  auto pb = plane(50);
  const GridField seed = project_mass(soliton_field(*pb, scaled_profile(pb->w, 0.8), {1.0, 0, 0}, false), 1.0);
  DescentOptions d;
  d.tol = 1e-6;
  const DescentResult R = constrained_descent(*pb, seed, d);
  CHECK(R.converged);
  CHECK(R.energy == doctest::Approx(pb->w.energy).epsilon(1e-3));
  CHECK(R.lambda == doctest::Approx(pb->lambda_infty).epsilon(1e-2));
}

TEST_CASE("symmetry detection") {
  auto pb = plane(30);
  const GridField c = soliton_field(*pb, pb->w, {0, 0, 0});
  const Symmetry s = detect_symmetry(*pb, c);
  CHECK(s.fixes(0));
  CHECK(s.fixes(1));
  const GridField off = soliton_field(*pb, pb->w, {3, 0, 0});
  const Symmetry t = detect_symmetry(*pb, off);
  CHECK_FALSE(t.fixes(0));
  CHECK(t.fixes(1));
}
