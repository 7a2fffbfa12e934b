#include <doctest.h>

#include <cmath>
#include <sstream>

#include "normsol/ground_state.hpp"
#include "normsol/scaling_laws.hpp"

using namespace normsol;

TEST_CASE("line soliton matches the sech formula for several p") {
  for (double p : {3.0, 4.0, 5.0}) {
    const RadialProfile w = shoot_radial(1, p, 0.7);
    double err = 0;
    for (std::size_t i = 0; i < w.r_grid.size(); i += 7) err = std::max(err, std::abs(w.values[i] - sech_soliton(w.r_grid[i], p, 0.7)));
    CHECK(err < 1e-9 * w.values[0]);
  }
}

TEST_CASE("identities hold in two and three dimensions") {
  for (int N : {2, 3}) {
    const RadialProfile w = shoot_radial(N, 3.0, 1.0);
    const auto r = pohozaev_nehari_residuals(w);
    CHECK(std::abs(r.nehari_res) / r.scale < 1e-8);
    CHECK(std::abs(r.pohozaev_res) / r.scale < 1e-8);
    CHECK(multiplier_identity(w).rel < 1e-8);
    CHECK(w.energy < 0);
  }
}

TEST_CASE("mass normalisation hits rho^2") {
  for (double rho : {0.5, 1.0, 2.0}) {
    const auto mn = normalize_to_mass(2, 3.0, rho);
    CHECK(mn.profile.mass_sq == doctest::Approx(rho * rho).epsilon(1e-9));
    // the multiplier scales as (rho^2)^s, with s = 1 here
    CHECK(mn.lambda_infty == doctest::Approx(rho * rho / mn.unit_lambda_mass_sq).epsilon(1e-12));
  }
}

TEST_CASE("scaled profile reproduces a direct shot") {
  const RadialProfile base = shoot_radial(3, 3.0, 1.0);
  const double s = compute_exponents(3, 3.0).s;
  const RadialProfile sc = scaled_profile(base, 0.5);
  const RadialProfile direct = shoot_radial(3, 3.0, std::pow(0.5, s));
  CHECK(sc.mass_sq == doctest::Approx(0.5 * base.mass_sq).epsilon(1e-10));
  CHECK(sc.energy == doctest::Approx(direct.energy).epsilon(1e-9));
  for (double r : {0.0, 1.0, 5.0, 20.0}) CHECK(sc.value(r) == doctest::Approx(direct.value(r)).epsilon(1e-7));
}

TEST_CASE("decay plateau is flat and matches the tail amplitude") {
  for (int N : {1, 2, 3}) {
    const DecayFit f = fit_decay_constant(shoot_radial(N, 3.0, 0.25));
    CHECK(f.spread < 0.01);
    CHECK(f.r_hi > f.r_lo);
  }
}

TEST_CASE("bad inputs") {
  CHECK_THROWS_AS(shoot_radial(1, 4.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(shoot_radial(3, 7.0, 1.0), std::invalid_argument);
}

TEST_CASE("profile text roundtrip") {
  const RadialProfile w = shoot_radial(2, 3.0, 1.0);
  std::stringstream ss;
  w.write(ss);
  const RadialProfile r = RadialProfile::read(ss);
  CHECK(r.N == 2);
  CHECK(r.values.size() == w.values.size());
  CHECK(r.value(3.3) == doctest::Approx(w.value(3.3)).epsilon(1e-12));
  CHECK(r.value(80.0) == doctest::Approx(w.value(80.0)).epsilon(1e-10));
}
