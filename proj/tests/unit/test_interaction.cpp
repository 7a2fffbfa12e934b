#include <doctest.h>

#include <cmath>

#include "normsol/ground_state.hpp"
#include "normsol/interaction.hpp"

using namespace normsol;

TEST_CASE("overlap of two line exponentials") {
  // \int e^{-|x|} e^{-|x - D|} dx = (1 + D) e^{-D}
  RadialFn f{[](double) { return 1.0; }, 1.0, 0};
  for (double D : {2.0, 5.0, 10.0}) {
    const auto q = overlap_integral(1, f, f, D, 1.0);
    CHECK(q.value == doctest::Approx(1 + D).epsilon(1e-8));
  }
}

TEST_CASE("limit with decaying weight") {
  RadialFn g{[](double) { return 1.0; }, 1.0, 0};
  RadialFn h{[](double) { return 1.0; }, 2.0, 0};
  const auto rep = bl_limit(1, g, h, 1.0, 0.0, 1.0, {4, 8, 12, 16, 20});
  CHECK(rep.predicted == doctest::Approx(4.0 / 3));
  CHECK(rep.scaled.back() == doctest::Approx(rep.predicted).epsilon(1e-6));
}

TEST_CASE("limit hypotheses are checked") {
  RadialFn g{[](double) { return 1.0; }, 1.0, 0};
  RadialFn slow{[](double) { return 1.0; }, 0.5, 0};
  CHECK_THROWS_AS(bl_limit(1, slow, g, 1.0, 0.0, 1.0, {4, 8}), BLError);
  CHECK_THROWS_AS(bl_limit(1, g, g, 1.0, 0.0, 1.0, {4, 8}), BLError);
}

TEST_CASE("interaction ratio approaches its limit constant") {
  const RadialProfile base = shoot_radial(2, 3.0, 1.0);
  const BumpPair bp = make_bump_pair(base, std::sqrt(base.mass_sq), 0.3);
  const double c = limit_constants(bp).c1t;
  const auto a = interaction_estimate(12, bp, {-1, 0});
  const auto b = interaction_estimate(24, bp, {-1, 0});
  CHECK(std::abs(b.ratio_tau / c - 1) < std::abs(a.ratio_tau / c - 1));
  CHECK(std::abs(b.ratio_tau / c - 1) < 0.02);
}

TEST_CASE("delta_t at t = 0 has no exponential factor") {
  CHECK(delta_t(10, 0.0, 1.0, 1.0, 1) == doctest::Approx(1.0));
  CHECK(delta_t(10, 0.25, 1.0, 1.0, 1) == doctest::Approx(std::exp(-10.0)));
}
