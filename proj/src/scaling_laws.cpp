#include "normsol/scaling_laws.hpp"

#include <cmath>
#include <string>

#include "normsol/radial_profile.hpp"

namespace normsol {

void ModelParams::validate() const {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  if (!(p > 2.0 && p < two_c()))
    throw std::invalid_argument("p = " + std::to_string(p) + " outside (2, " +
                                std::to_string(two_c()) + ")");
  if (!(rho > 0)) throw std::invalid_argument("rho must be positive");
}

ScalingConstants compute_exponents(int N, double p) {
  ModelParams mp{N, p, 1.0};
  mp.validate();
  ScalingConstants c;
  c.two_c = mp.two_c();
  c.s = (2.0 / N) * (p - 2.0) / (c.two_c - p);
  c.one_plus_s = 1.0 + c.s;
  c.one_plus_s_alt = (2.0 * p - N * (p - 2.0)) / (4.0 - N * (p - 2.0));
  c.threshold_factor = std::pow(2.0, -c.s);
  c.mass_exponent = 2.0 / (p - 2.0) - N / 2.0;
  return c;
}

ScalingConstants compute_exponents(const ModelParams& params) {
  params.validate();
  return compute_exponents(params.N, params.p);
}

namespace {

RadialProfile rescale_lambda(const RadialProfile& base, double Lam) {
  const double p = base.p;
  const int N = base.N;
  const double amp = std::pow(Lam, 1.0 / (p - 2.0));
  const double sq = std::sqrt(Lam);
  RadialProfile out = base;
  out.lambda = base.lambda * Lam;
  out.dr = base.dr / sq;
  out.r_match = base.r_match / sq;
  for (std::size_t i = 0; i < out.r_grid.size(); ++i) {
    out.r_grid[i] = base.r_grid[i] / sq;
    out.values[i] = amp * base.values[i];
    out.derivs[i] = amp * sq * base.derivs[i];
  }
  const double e = 2.0 / (p - 2.0) - N / 2.0;
  out.mass_sq = base.mass_sq * std::pow(Lam, e);
  out.grad_sq = base.grad_sq * std::pow(Lam, e + 1.0);
  out.p_norm = base.p_norm * std::pow(Lam, p / (p - 2.0) - N / 2.0);
  out.energy = 0.5 * out.grad_sq - out.p_norm / p;
  const double nu = (N - 2) / 2.0;
  out.tail_amp = base.tail_amp * std::pow(Lam, 1.0 / (p - 2.0) - nu / 2.0);
  out.c_decay = out.tail_amp * std::sqrt(M_PI / 2.0) * std::pow(out.lambda, -0.25);
  return out;
}

}  // namespace

RadialProfile scaled_profile(const RadialProfile& base, double k) {
  if (!(k > 0)) throw std::invalid_argument("scaled_profile: k must be positive");
  if (k == 1.0) return base;
  auto sc = compute_exponents(base.N, base.p);
  return rescale_lambda(base, std::pow(k, sc.s));
}

DecayRate decay_rate_d_rho(double lambda_1, const ModelParams& params) {
  if (!(lambda_1 > 0)) throw std::invalid_argument("lambda_1 must be positive");
  const double N = params.N, p = params.p;
  DecayRate d;
  d.exponent = (p - 2.0) / (4.0 - N * (p - 2.0));
  d.d_rho = std::pow(2.0, 1.0 - d.exponent) * std::sqrt(lambda_1) * std::pow(params.rho, d.exponent);
  const double hs = compute_exponents(params).s / 2.0;
  d.d_rho_half_s = std::pow(2.0, 1.0 - hs) * std::sqrt(lambda_1) * std::pow(params.rho, hs);
  return d;
}

IdentityResiduals pohozaev_nehari_residuals(int N, double p, double lambda, double M, double A,
                                            double B, double E) {
  IdentityResiduals r;
  r.energy_res = E - (0.5 * A - B / p);
  r.nehari_res = A + lambda * M - B;
  r.pohozaev_res = 0.5 * (N - 2) * A + 0.5 * N * lambda * M - (N / p) * B;
  r.scale = std::abs(A) + std::abs(lambda * M) + std::abs(B);
  return r;
}

IdentityResiduals pohozaev_nehari_residuals(const RadialProfile& w) {
  return pohozaev_nehari_residuals(w.N, w.p, w.lambda, w.mass_sq, w.grad_sq, w.p_norm, w.energy);
}

MultiplierIdentity multiplier_identity(const RadialProfile& w) {
  auto sc = compute_exponents(w.N, w.p);
  MultiplierIdentity m;
  m.lhs = 0.5 * w.lambda * w.mass_sq;
  m.rhs = -sc.one_plus_s_alt * w.energy;
  m.rel = std::abs(m.lhs - m.rhs) / std::abs(m.lhs);
  m.mass_from_energy = 2.0 * sc.one_plus_s / w.lambda * (-w.energy);
  m.rel_mass = std::abs(m.mass_from_energy - w.mass_sq) / w.mass_sq;
  return m;
}

double split_energy_factor(double t, double s) {
  return std::pow(t, 1.0 + s) + std::pow(1.0 - t, 1.0 + s);
}

SplittingCheck splitting_inequalities(double t, double s) {
  SplittingCheck c;
  c.lhs_weighted = std::pow(2.0, s) * std::pow(t, 1.0 + s) + std::pow(1.0 - t, 1.0 + s);
  c.lhs_concavity = (std::pow(t, 1.0 + s) - 1.0) - (1.0 + s) * std::pow(t, s) * (t - 1.0);
  const double eps = 1e-14;
  c.ok_weighted = c.lhs_weighted <= 1.0 + eps;
  c.ok_concavity = c.lhs_concavity <= eps;
  return c;
}

double elementary_power_inequality(double a, double b, double p) {
  const double full = std::pow(a + b, p);
  if (full == 0.0) return 0.0;
  const double slack = full - std::pow(a, p) - std::pow(b, p) -
                       (p - 1.0) * (std::pow(a, p - 1.0) * b + a * std::pow(b, p - 1.0));
  return slack / full;
}

}  // namespace normsol
