#pragma once
#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "normsol/domain_potential.hpp"
#include "normsol/field_energy.hpp"
#include "normsol/radial_profile.hpp"
#include "normsol/scaling_laws.hpp"

namespace normsol {

struct GridSpec {
  double h = 0.5;
  double half_width = 0;  // box [-B, B]^N
  int order = 4;
  int layers = 2;
  double x_max = 0;  // > 0 selects the half-line [0, x_max] (N = 1)
};

// Everything a run on one lattice needs: operator, cutoff, ball stencil, limit soliton.
struct Problem {
  ModelParams params;
  ExteriorDomainSpec domain;
  PotentialSpec V;
  GridSpec grid;
  ScalingConstants sc;
  double lambda_infty = 0;
  RadialProfile w;  // mass-rho soliton of the limit problem
  LatticePtr lat;
  std::shared_ptr<EnergyFunctional> ef;
  BallStencil ball;
  std::vector<double> theta;

  bool half_line() const { return grid.x_max > 0; }
  double decay_length() const;
};

std::shared_ptr<Problem> make_problem(const ModelParams& params, const ExteriorDomainSpec& domain,
                                      const PotentialSpec& V, const GridSpec& grid,
                                      Backend backend = Backend::parallel, const RadialProfile* w = nullptr);

// theta(x) w(|x - c|), not normalised
GridField soliton_field(const Problem& pb, const RadialProfile& w, const std::array<double, 3>& c,
                        bool cutoff = true);

// m on the same lattice: minimum of E_h over S_rho without obstacle and potential
struct DiscreteReference {
  double m = 0;
  double m_h = 0;
  double eta = 0;  // |m_h - m|
  double two_minus_s_m = 0;
  double two_minus_s_m_h = 0;
  double residual = 0;
};

DiscreteReference discrete_reference(const Problem& pb);

// Sigma = boundary of B_2(e_1): two points for N = 1, uniform angles for N = 2,
// a Fibonacci lattice for N = 3.
struct SigmaMesh {
  int N = 1;
  std::vector<std::array<double, 3>> z;
  std::vector<std::vector<double>> angles;
};

SigmaMesh make_sigma_mesh(int N, int points);
std::array<double, 3> sigma_point(int N, const std::vector<double>& angles);

// scaled copies of the limit soliton keyed by mass fraction
class ProfileCache {
 public:
  explicit ProfileCache(const RadialProfile& base) : base_(base) {}
  const RadialProfile& get(double k);

 private:
  RadialProfile base_;
  std::map<double, std::unique_ptr<RadialProfile>> cache_;
  std::mutex mu_;
};

struct SurfaceOptions {
  int sigma_points = 64;
  int t_points = 21;
  bool with_beta = true;
};

struct TestSurface {
  double r = 0;
  SigmaMesh sigma;
  std::vector<double> t_grid;
  std::vector<std::vector<double>> energy;  // [t][z]
  std::vector<std::vector<std::array<double, 3>>> beta;
  std::shared_ptr<const Problem> prob;
  std::shared_ptr<ProfileCache> profiles;
  bool obstacle_overlap = false;  // r too small for the obstacle, reported only

  GridField field(double t, const std::array<double, 3>& z) const;
  double field_energy(double t, const std::array<double, 3>& z) const;
};

TestSurface build_surface(double r, std::shared_ptr<const Problem> pb, const SurfaceOptions& opt = {});

struct SurfacePoint {
  double value = 0;
  double t = 0;
  std::vector<double> angles;
  std::array<double, 3> z{0, 0, 0};
};

struct MinMaxReport {
  double r = 0;
  double m = 0;
  double two_minus_s_m = 0;
  double m_h = 0;
  double two_minus_s_m_h = 0;
  double eta = 0;
  SurfacePoint L_r;
  SurfacePoint A_r;
  double C0 = 0;
  // L_r - m_h, C0 - L_r, A_r - C0, 2^{-s} m_h - A_r
  std::array<double, 4> margins{0, 0, 0, 0};
  bool ordering_ok = false;
  std::string failed;
};

MinMaxReport landmarks(const TestSurface& S, const DiscreteReference& ref, double C0);

struct Witness {
  bool found = false;
  double t = 0;
  std::vector<double> angles;
  std::array<double, 3> z{0, 0, 0};
  std::array<double, 3> beta{0, 0, 0};
  double beta_norm = 0;
  double energy = 0;
  int degree = 0;
  std::string method;
};

Witness find_zero_barycenter(const TestSurface& S);

struct C0Options {
  int max_iter = 1500;
  double tol = 1e-6;              // residual at which a start is considered settled
  std::vector<double> penalties;  // continuation, in units of |m| / decay_length^2
  bool include_dipole = true;
  bool include_centred = true;
  bool include_asymmetric = true;
};

struct C0Start {
  std::string name;
  double value = 0;
  double beta_norm = 0;
  bool feasible = false;
  bool converged = false;
  int iterations = 0;
};

struct C0Estimate {
  double value = 0;
  std::string best_start;
  GridField minimizer;
  std::vector<C0Start> starts;
  bool converged = false;
};

// witness: optional extra start (its raw energy is also a candidate value)
C0Estimate estimate_C0(const Problem& pb, const GridField* witness, double r, const C0Options& opt = {});

}  // namespace normsol
