#pragma once
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "normsol/radial_profile.hpp"
#include "normsol/scaling_laws.hpp"

namespace normsol {

struct ExteriorDomainSpec {
  double obstacle_radius = 0;  // 0: whole space
  double cutoff_R = 0;
  double ramp_eps = 0.15;

  bool whole_space() const { return obstacle_radius <= 0; }
  double hole_radius() const { return obstacle_radius; }
  void validate() const;
  // radial cutoff profile; the ramp runs in log(|x| / R_obs)
  double theta(double r) const;
  double theta_prime(double r) const;
};

// C^2 ramp on [0,1]: 0 at 0, 1 at 1
double smooth_ramp(double u, double eps);
double smooth_ramp_prime(double u, double eps);

double cutoff_theta(const std::vector<double>& x, const ExteriorDomainSpec& domain);

// step: a / (1 + e^{b x}), monotone, N = 1 only
enum class PotentialForm { zero, exponential, gaussian, bump, tabulated, step };

PotentialForm parse_potential_form(const std::string& s);
std::string to_string(PotentialForm f);

constexpr double q_infinity = std::numeric_limits<double>::infinity();

struct PotentialSpec {
  PotentialForm form = PotentialForm::zero;
  double amplitude = 0;
  double rate = 1;              // exponential: a e^{-b r}; gaussian: a e^{-b r^2}; bump: support radius
  std::vector<double> center;   // empty = origin; shifted potentials are supported for N = 1
  double q = q_infinity;
  std::vector<double> table_r;  // tabulated radial samples
  std::vector<double> table_v;

  bool nonneg() const;
  bool is_zero() const { return form == PotentialForm::zero || amplitude == 0; }
  void validate(int N) const;
  double radial(double r) const;  // profile about the center
  double operator()(const double* x, int N) const;
  double support_radius() const;  // infinity when not compact
};

struct PotentialError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double lq_norm(const PotentialSpec& V, double q, int N);

enum class DecayVerdict { converges, diverges, unknown };
std::string to_string(DecayVerdict v);

struct DecayCheck {
  double integral_value = 0;
  double tail_bound = 0;
  double truncation_radius = 0;
  DecayVerdict verdict = DecayVerdict::unknown;
};

DecayCheck check_decay_condition(const PotentialSpec& V, double d_rho, int N);

struct Threshold {
  double L = 0;              // through the mass-rho soliton
  double L_power_law = 0;    // (1/2) c rho^{(2s/q)(q - N/2)}
  double c = 0;
  double exponent = 0;
  double m_rho = 0;
  double w2_norm = 0;        // |w_rho^2|_{q'}
};

// unit: the soliton of unit mass
Threshold smallness_threshold_wholespace(double q, const ModelParams& params, const RadialProfile& unit);

// |w^2|_{q'} of a radial profile
double profile_square_norm(const RadialProfile& w, double q_prime);

bool q_admissible(double q, int N);

}  // namespace normsol
