#pragma once
#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "normsol/domain_potential.hpp"
#include "normsol/kernels.hpp"
#include "normsol/lattice.hpp"
#include "normsol/linear_solvers.hpp"
#include "normsol/scaling_laws.hpp"

namespace normsol {

struct EnergyReport {
  double kinetic = 0;         // (1/2)|grad u|^2
  double potential_term = 0;  // (1/2) \int V u^2
  double nonlinear = 0;       // (1/p)|u|_p^p
  double total = 0;
  double lambda_est = 0;
  double residual_norm = 0;
  double mass_sq = 0;
};

class EnergyFunctional {
 public:
  EnergyFunctional(LatticePtr lat, ModelParams params, const PotentialSpec& V, int order = 4,
                   Backend backend = Backend::parallel);

  const Lattice& lattice() const { return *lat_; }
  LatticePtr lattice_ptr() const { return lat_; }
  const ModelParams& params() const { return params_; }
  int order() const { return order_; }
  Backend backend() const { return backend_; }
  const std::vector<double>& potential() const { return V_; }
  bool has_potential() const { return has_V_; }
  const KernelSet& k() const { return kernels(backend_); }
  double dv() const { return lat_->cell_volume(); }

  EnergyReport energy(const GridField& u, bool with_residual = true) const;
  double total_energy(const GridField& u) const;
  double mass_sq(const GridField& u) const;
  double inner(const std::vector<double>& a, const std::vector<double>& b) const;
  double lagrange_multiplier(const GridField& u) const;
  std::vector<double> el_residual(const GridField& u, double lambda) const;
  // lattice H^1-dual norm, one Helmholtz solve
  double residual_norm(const std::vector<double>& r) const;
  // L2-gradient of E: -Lap u + V u - |u|^{p-2} u
  void gradient(const GridField& u, std::vector<double>& g) const;
  // -Lap v + (V + lambda) v - (p-1)|u|^{p-2} v
  void jacobian_apply(const GridField& u, double lambda, const std::vector<double>& v, std::vector<double>& out) const;
  const DstPreconditioner& helmholtz() const { return *helm_; }

 private:
  LatticePtr lat_;
  ModelParams params_;
  int order_;
  Backend backend_;
  std::vector<double> V_;
  bool has_V_ = false;
  std::unique_ptr<DstPreconditioner> helm_;
};

GridField sample_field(LatticePtr lat, const std::function<double(const std::array<double, 3>&)>& f);
GridField project_mass(const GridField& u, double rho);
double grid_mass_sq(const GridField& u);

struct Barycenter {
  std::array<double, 3> beta{0, 0, 0};
  double weight = 0;  // sum of the thresholded average
  double mu_max = 0;
  std::size_t argmax = 0;
};

Barycenter barycenter(const GridField& u, const BallStencil& ball, Backend backend = Backend::parallel);
// L2-gradient of (1/2)|beta(u) - target|^2
void barycenter_penalty_gradient(const GridField& u, const BallStencil& ball, const Barycenter& b,
                                 const std::array<double, 3>& target, std::vector<double>& g,
                                 Backend backend = Backend::parallel);

enum class SignClass { constant_sign, sign_changing };
std::string to_string(SignClass c);

struct SignContext {
  bool near_critical = false;
  double energy = 0;
  double two_minus_s_m = 0;
  double limit_mass_sq = 0;  // |w_lambda|_2^2 of the limit soliton with the same multiplier
};

struct SignReport {
  SignClass cls = SignClass::constant_sign;
  double min_value = 0;
  double max_value = 0;
  double noise_floor = 0;
  bool energy_check = true;  // E > 2^{-s} m when sign-changing and near-critical
  bool mass_check = true;    // |u|^2 > 2 |w|^2 likewise
};

SignReport sign_classify(const GridField& u, const SignContext& ctx);

// flat binary snapshot: header, run-length mask, row-major payload
void write_snapshot(std::ostream& os, const GridField& u);
GridField read_snapshot(std::istream& is);
// one line of nodes through the box centre along `axis`
void write_csv_slice(std::ostream& os, const GridField& u, int axis);

}  // namespace normsol
