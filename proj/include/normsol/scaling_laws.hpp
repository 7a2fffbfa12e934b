#pragma once
#include <stdexcept>

namespace normsol {

struct RadialProfile;

struct ModelParams {
  int N = 1;
  double p = 4.0;
  double rho = 1.0;

  double two_c() const { return 2.0 + 4.0 / N; }
  void validate() const;
};

struct ScalingConstants {
  double s = 0;
  double two_c = 0;
  double one_plus_s = 0;
  double one_plus_s_alt = 0;  // (2p - N(p-2)) / (4 - N(p-2))
  double threshold_factor = 0;  // 2^{-s}
  // mass^2 of the lambda-soliton scales as lambda^{mass_exponent}
  double mass_exponent = 0;
};

ScalingConstants compute_exponents(const ModelParams& params);
ScalingConstants compute_exponents(int N, double p);

// k^{s/(p-2)} w(k^{s/2} x): mass k rho^2, multiplier k^s lambda
RadialProfile scaled_profile(const RadialProfile& base, double k);

struct DecayRate {
  double d_rho = 0;
  double d_rho_half_s = 0;  // same value through (p-2)/(4-N(p-2)) = s/2
  double exponent = 0;
};

DecayRate decay_rate_d_rho(double lambda_1, const ModelParams& params);

struct IdentityResiduals {
  double energy_res = 0;    // E - (A/2 - B/p)
  double nehari_res = 0;    // A + lambda M - B
  double pohozaev_res = 0;  // (N-2)/2 A + N/2 lambda M - N/p B
  double scale = 1;         // reference magnitude for relative use
};

IdentityResiduals pohozaev_nehari_residuals(const RadialProfile& profile);
IdentityResiduals pohozaev_nehari_residuals(int N, double p, double lambda, double mass_sq,
                                            double grad_sq, double p_norm, double energy);

struct MultiplierIdentity {
  double lhs = 0;  // lambda/2 * mass^2
  double rhs = 0;  // -(1+s) E
  double rel = 0;
  double mass_from_energy = 0;  // 2 (1+s)/lambda (-E)
  double rel_mass = 0;
};

MultiplierIdentity multiplier_identity(const RadialProfile& profile);

struct SplittingCheck {
  double lhs_weighted = 0;  // 2^s t^{1+s} + (1-t)^{1+s}, <= 1 on [0, 1/3]
  double lhs_concavity = 0;
  bool ok_weighted = false;
  bool ok_concavity = false;
};

SplittingCheck splitting_inequalities(double t, double s);

// slack relative to (a+b)^p
double elementary_power_inequality(double a, double b, double p);

// t^{1+s} + (1-t)^{1+s}
double split_energy_factor(double t, double s);

}  // namespace normsol
