#include <doctest.h>

#include <cmath>

#include "normsol/domain_potential.hpp"
#include "normsol/ground_state.hpp"

using namespace normsol;

TEST_CASE("cutoff ramp is C^1 with value 0 on the obstacle and 1 outside R") {
  ExteriorDomainSpec d{1.0, 12.0, 0.15};
  d.validate();
  CHECK(d.theta(0.5) == 0.0);
  CHECK(d.theta(1.0) == 0.0);
  CHECK(d.theta(12.0) == 1.0);
  CHECK(d.theta(30.0) == 1.0);
  double prev = 0;
  for (double r = 1.0; r <= 12.0; r += 0.01) {
    const double t = d.theta(r);
    CHECK(t >= prev - 1e-15);
    prev = t;
    const double fd = (d.theta(r + 1e-6) - d.theta(r - 1e-6)) / 2e-6;
    CHECK(fd == doctest::Approx(d.theta_prime(r)).epsilon(1e-4).scale(1.0));
  }
}

TEST_CASE("ramp second derivative is continuous at the joins") {
  const double eps = 0.15, e = 1e-7;
  for (double u : {eps, 1 - eps}) {
    const double l = (smooth_ramp_prime(u - e, eps) - smooth_ramp_prime(u - 2 * e, eps)) / e;
    const double r = (smooth_ramp_prime(u + 2 * e, eps) - smooth_ramp_prime(u + e, eps)) / e;
    CHECK(l == doctest::Approx(r).epsilon(1e-4).scale(1.0));
  }
}

TEST_CASE("invalid domains") {
  CHECK_THROWS(ExteriorDomainSpec{2.0, 1.0, 0.15}.validate());
  CHECK_THROWS(ExteriorDomainSpec{-1.0, 0.0, 0.15}.validate());
}

TEST_CASE("gaussian L^q norm") {
  PotentialSpec V;
  V.form = PotentialForm::gaussian;
  V.amplitude = 0.3;
  V.rate = 0.7;
  for (int N : {1, 2, 3})
    for (double q : {1.5, 2.0, 4.0}) {
      const double exact = 0.3 * std::pow(M_PI / (0.7 * q), N / (2 * q));
      CHECK(lq_norm(V, q, N) == doctest::Approx(exact).epsilon(1e-9));
    }
  CHECK(lq_norm(V, q_infinity, 2) == doctest::Approx(0.3));
}

TEST_CASE("step potential is bounded but not integrable") {
  PotentialSpec V;
  V.form = PotentialForm::step;
  V.amplitude = 0.1;
  V.rate = 1.0;
  V.validate(1);
  CHECK_THROWS(V.validate(2));
  CHECK(lq_norm(V, q_infinity, 1) == doctest::Approx(0.1));
  CHECK_THROWS_AS(lq_norm(V, 2.0, 1), PotentialError);
  const double x0 = -5, x1 = 5;
  CHECK(V(&x0, 1) > V(&x1, 1));
}

TEST_CASE("admissible exponents") {
  CHECK(q_admissible(0.5, 1) == false);
  CHECK(q_admissible(1.0, 1));
  CHECK(q_admissible(1.0, 2) == false);
  CHECK(q_admissible(1.5, 3));
  CHECK(q_admissible(1.2, 3) == false);
  CHECK(q_admissible(q_infinity, 3));
}

TEST_CASE("threshold at the critical exponent does not depend on rho") {
  const RadialProfile w1 = normalize_to_mass(3, 3.0, 1.0).profile;
  const double a = smallness_threshold_wholespace(1.5, ModelParams{3, 3.0, 0.5}, w1).L;
  const double b = smallness_threshold_wholespace(1.5, ModelParams{3, 3.0, 3.0}, w1).L;
  CHECK(a == doctest::Approx(b).epsilon(1e-10));
  const double c = smallness_threshold_wholespace(q_infinity, ModelParams{1, 4.0, 2.0}, normalize_to_mass(1, 4.0, 1.0).profile).L;
  CHECK(c == doctest::Approx(0.125).epsilon(1e-8));
}
