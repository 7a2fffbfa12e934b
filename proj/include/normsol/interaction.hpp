#pragma once
#include <functional>
#include <stdexcept>
#include <vector>

#include "normsol/radial_profile.hpp"

namespace normsol {

// radial function known through f(d) e^{rate d}
struct RadialFn {
  std::function<double(double)> scaled;
  double rate = 0;
  double knot = 0;  // scaled is smooth beyond this radius
  double operator()(double d) const;
};

RadialFn profile_fn(const RadialProfile& w);
RadialFn profile_power_fn(const RadialProfile& w, double q);

struct QuadResult {
  double value = 0;
  double error = 0;
};

// e^{kappa D} \int f(|x - c1|) g(|x - c2|) dx with |c1 - c2| = D, kappa <= min rates
QuadResult overlap_integral(int N, const RadialFn& f, const RadialFn& g, double D, double kappa,
                            double tol = 1e-10);

// \int h(|y|) e^{-alpha y.e} dy
QuadResult exponential_moment(int N, const RadialFn& h, double alpha, double tol = 1e-12);

struct InteractionEstimate {
  double r = 0;
  double t = 0;
  std::vector<double> z;
  double delta = 0;
  double tau = 0;
  double sigma = 0;
  double ratio_tau = 0;
  double ratio_sigma = 0;
  double c1t = 0;
  double c2t = 0;
  double quad_error = 0;
};

// profiles of the two bumps of the test surface, built from the mass-rho soliton
struct BumpPair {
  RadialProfile small;  // w_{t rho^2}
  RadialProfile large;  // w_{(1-t) rho^2}
  double t = 0;
  double rho = 1;
  double s = 0;
  double lambda_infty = 0;
  double c1 = 0;
};

BumpPair make_bump_pair(const RadialProfile& base, double rho, double t);

double delta_t(double r, double t, double lambda_infty, double s, int N);
QuadResult tau_t(double r, const BumpPair& bp, const std::vector<double>& z);
QuadResult sigma_t(double r, const BumpPair& bp, const std::vector<double>& z);

struct LimitConstants {
  double c1t = 0;
  double c2t = 0;
  double c_t = 0;
  double c_t_direct = 0;  // decay constant of w_{t rho^2} itself
  double moment1 = 0;
  double moment2 = 0;
};

LimitConstants limit_constants(const BumpPair& bp);

InteractionEstimate interaction_estimate(double r, const BumpPair& bp, const std::vector<double>& z);

struct BLReport {
  std::vector<double> r;
  std::vector<double> scaled;
  double extrapolated = 0;
  double predicted = 0;
  double rel_diff = 0;
  double gamma = 0;
  bool hypotheses_ok = false;
  double h_weighted = 0;
};

struct BLError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// lim (\int g(x + r z) h(x) dx) e^{alpha |r z|} |r z|^b
BLReport bl_limit(int N, const RadialFn& g, const RadialFn& h, double alpha, double b, double zn,
                  const std::vector<double>& r_sequence);

}  // namespace normsol
