#pragma once
#include <stdexcept>
#include <string>

#include "normsol/radial_profile.hpp"

namespace normsol {

struct ShootError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShootOptions {
  double tol = 1e-18;          // relative ODE tolerance
  double dr = 0.01;            // table spacing in units of 1/sqrt(lambda)
  double r_table = 40.0;       // table length in the same units
  double r_shoot = 60.0;       // classification horizon
  double match_tol = 1e-7;     // lo/hi trajectory agreement used to place r_match
  int max_iter = 200;
};

RadialProfile shoot_radial(int N, double p, double lambda, const ShootOptions& opt = {});

struct MassNormalized {
  double lambda_infty = 0;
  double unit_lambda_mass_sq = 0;  // mass^2 at lambda = 1
  RadialProfile profile;
};

MassNormalized normalize_to_mass(int N, double p, double rho, const ShootOptions& opt = {});

struct DecayFit {
  double c1 = 0;
  double plateau_mean = 0;
  double plateau_min = 0;
  double plateau_max = 0;
  double spread = 0;       // (max - min) / mean over the window
  double end_ratio = 0;    // plateau at r_match / c1
  double deriv_ratio = 0;  // w' e^{sqrt(l) r} r^{(N-1)/2} / (-c1 sqrt(l)) at r_match
  double r_lo = 0;
  double r_hi = 0;
  bool ok = false;
};

DecayFit fit_decay_constant(const RadialProfile& profile);

// ((p/2) lambda)^{1/(p-2)} sech^{2/(p-2)}((p-2) sqrt(lambda) x / 2)
double sech_soliton(double x, double p, double lambda);

}  // namespace normsol
