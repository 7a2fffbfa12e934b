#include "normsol/field_energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace normsol {

EnergyFunctional::EnergyFunctional(LatticePtr lat, ModelParams params, const PotentialSpec& V, int order,
                                   Backend backend)
    : lat_(std::move(lat)), params_(params), order_(order), backend_(backend) {
  if (order != 2 && order != 4) throw std::invalid_argument("stencil order must be 2 or 4");
  if (lat_->dim != params.N) throw std::invalid_argument("lattice dimension differs from N");
  params_.validate();
  has_V_ = !V.is_zero();
  if (has_V_) {
    V_.resize(lat_->size());
    for (std::size_t i = 0; i < lat_->size(); ++i) {
      auto x = lat_->position(i);
      V_[i] = V(x.data(), lat_->dim);
    }
  }
  helm_ = std::make_unique<DstPreconditioner>(lat_, order_, 1.0);
}

EnergyReport EnergyFunctional::energy(const GridField& u, bool with_residual) const {
  const double p = params_.p;
  auto s = k().energy_sums(*lat_, order_, u.v.data(), has_V_ ? V_.data() : nullptr, p);
  const double dv = this->dv();
  EnergyReport r;
  r.kinetic = 0.5 * s.kinetic * dv;
  r.potential_term = 0.5 * s.potential * dv;
  r.nonlinear = s.power * dv / p;
  r.total = r.kinetic + r.potential_term - r.nonlinear;
  r.mass_sq = s.mass * dv;
  r.lambda_est = (s.power - s.kinetic - s.potential) * dv / r.mass_sq;
  if (with_residual) r.residual_norm = residual_norm(el_residual(u, r.lambda_est));
  return r;
}

double EnergyFunctional::total_energy(const GridField& u) const { return energy(u, false).total; }

double EnergyFunctional::mass_sq(const GridField& u) const { return k().dot(*lat_, u.v.data(), u.v.data()) * dv(); }

double EnergyFunctional::inner(const std::vector<double>& a, const std::vector<double>& b) const {
  return k().dot(*lat_, a.data(), b.data()) * dv();
}

double EnergyFunctional::lagrange_multiplier(const GridField& u) const { return energy(u, false).lambda_est; }

std::vector<double> EnergyFunctional::el_residual(const GridField& u, double lambda) const {
  std::vector<double> r(u.size());
  k().el_residual(*lat_, order_, u.v.data(), has_V_ ? V_.data() : nullptr, lambda, params_.p, r.data());
  return r;
}

double EnergyFunctional::residual_norm(const std::vector<double>& r) const {
  const Lattice& L = *lat_;
  LinOp A = [&](const std::vector<double>& x, std::vector<double>& y) {
    y.resize(x.size());
    k().neg_laplacian(L, order_, x.data(), y.data());
    for (std::size_t i = 0; i < x.size(); ++i)
      if (L.free[i]) y[i] += x[i];
  };
  LinOp M = [&](const std::vector<double>& x, std::vector<double>& y) {
    y.resize(x.size());
    helm_->apply(x.data(), y.data());
  };
  std::vector<double> z(r.size(), 0.0);
  conjugate_gradient(A, M, r, z, 1e-8, 500);
  return std::sqrt(std::max(inner(r, z), 0.0));
}

void EnergyFunctional::gradient(const GridField& u, std::vector<double>& g) const {
  g.resize(u.size());
  k().el_residual(*lat_, order_, u.v.data(), has_V_ ? V_.data() : nullptr, 0.0, params_.p, g.data());
}

void EnergyFunctional::jacobian_apply(const GridField& u, double lambda, const std::vector<double>& v,
                                      std::vector<double>& out) const {
  const Lattice& L = *lat_;
  out.resize(v.size());
  k().neg_laplacian(L, order_, v.data(), out.data());
  const double p = params_.p;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(v.size());
  const double* Vp = has_V_ ? V_.data() : nullptr;
#pragma omp parallel for schedule(static) if (backend_ == Backend::parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (!L.free[i]) continue;
    const double a = std::abs(u.v[i]);
    out[i] += ((Vp ? Vp[i] : 0.0) + lambda - (p - 1.0) * pow_abs(a, p - 2.0)) * v[i];
  }
}

GridField sample_field(LatticePtr lat, const std::function<double(const std::array<double, 3>&)>& f) {
  GridField u(lat);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(lat->size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    if (lat->free[i]) u.v[i] = f(lat->position(static_cast<std::size_t>(i)));
  return u;
}

double grid_mass_sq(const GridField& u) {
  double s = 0;
  for (double x : u.v) s += x * x;
  return s * u.lat->cell_volume();
}

GridField project_mass(const GridField& u, double rho) {
  const double m = grid_mass_sq(u);
  if (!(m > 0)) throw std::invalid_argument("project_mass: zero field");
  GridField out = u;
  const double s = rho / std::sqrt(m);
  for (double& x : out.v) x *= s;
  return out;
}

Barycenter barycenter(const GridField& u, const BallStencil& ball, Backend backend) {
  const Lattice& L = *u.lat;
  std::vector<double> a(u.size()), mu(u.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(u.v[i]);
  kernels(backend).ball_average(L, ball, a.data(), mu.data());
  Barycenter b;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i] > b.mu_max) {
      b.mu_max = mu[i];
      b.argmax = i;
    }
  if (!(b.mu_max > 0)) throw std::invalid_argument("barycenter of the zero field");
  const double half = 0.5 * b.mu_max;
  double S = 0;
  std::array<double, 3> P{0, 0, 0};
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double w = mu[i] - half;
    if (w <= 0) continue;
    auto x = L.position(i);
    S += w;
    for (int d = 0; d < L.dim; ++d) P[d] += w * x[d];
  }
  b.weight = S;
  for (int d = 0; d < L.dim; ++d) b.beta[d] = P[d] / S;
  return b;
}

void barycenter_penalty_gradient(const GridField& u, const BallStencil& ball, const Barycenter& b,
                                 const std::array<double, 3>& target, std::vector<double>& g, Backend backend) {
  const Lattice& L = *u.lat;
  std::vector<double> a(u.size()), mu(u.size()), q(u.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(u.v[i]);
  kernels(backend).ball_average(L, ball, a.data(), mu.data());
  const double half = 0.5 * b.mu_max;
  std::array<double, 3> dev{0, 0, 0};
  for (int d = 0; d < L.dim; ++d) dev[d] = b.beta[d] - target[d];
  double corr = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] - half <= 0) continue;
    auto x = L.position(i);
    double s = 0;
    for (int d = 0; d < L.dim; ++d) s += dev[d] * (x[d] - b.beta[d]);
    q[i] = s / b.weight;
    corr += s;
  }
  q[b.argmax] -= 0.5 * corr / b.weight;
  g.resize(u.size());
  kernels(backend).ball_average(L, ball, q.data(), g.data());
  const double idv = 1.0 / L.cell_volume();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double sg = u.v[i] > 0 ? 1.0 : (u.v[i] < 0 ? -1.0 : 0.0);
    g[i] = L.free[i] ? sg * g[i] * idv : 0.0;
  }
}

std::string to_string(SignClass c) { return c == SignClass::constant_sign ? "constant-sign" : "sign-changing"; }

SignReport sign_classify(const GridField& u, const SignContext& ctx) {
  SignReport r;
  r.min_value = *std::min_element(u.v.begin(), u.v.end());
  r.max_value = *std::max_element(u.v.begin(), u.v.end());
  const double amax = std::max(std::abs(r.min_value), std::abs(r.max_value));
  r.noise_floor = 1e-8 * amax;
  const bool has_pos = r.max_value > r.noise_floor, has_neg = r.min_value < -r.noise_floor;
  r.cls = (has_pos && has_neg) ? SignClass::sign_changing : SignClass::constant_sign;
  if (r.cls == SignClass::sign_changing && ctx.near_critical) {
    r.energy_check = ctx.energy > ctx.two_minus_s_m;
    r.mass_check = grid_mass_sq(u) > 2.0 * ctx.limit_mass_sq;
  }
  return r;
}

}  // namespace normsol
