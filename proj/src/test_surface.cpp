#include <algorithm>
#include <cmath>
#include <numbers>
#include <omp.h>
#include <stdexcept>

#include "normsol/ground_state.hpp"
#include "normsol/minmax.hpp"
#include "normsol/saddle.hpp"

namespace normsol {

std::shared_ptr<Problem> make_problem(const ModelParams& params, const ExteriorDomainSpec& domain,
                                      const PotentialSpec& V, const GridSpec& grid, Backend backend,
                                      const RadialProfile* w) {
  params.validate();
  domain.validate();
  V.validate(params.N);
  auto pb = std::make_shared<Problem>();
  pb->params = params;
  pb->domain = domain;
  pb->V = V;
  pb->grid = grid;
  pb->sc = compute_exponents(params);
  if (w) {
    pb->w = *w;
    pb->lambda_infty = w->lambda;
  } else {
    auto mn = normalize_to_mass(params.N, params.p, params.rho);
    pb->w = std::move(mn.profile);
    pb->lambda_infty = mn.lambda_infty;
  }
  std::shared_ptr<Lattice> lat;
  if (grid.x_max > 0) {
    if (params.N != 1) throw std::invalid_argument("half-line grids need N = 1");
    lat = Lattice::interval(0.0, grid.x_max, grid.h, grid.layers);
  } else {
    if (!(grid.half_width > 0)) throw std::invalid_argument("grid half_width must be positive");
    lat = Lattice::box(params.N, grid.half_width, grid.h, grid.layers);
    if (!domain.whole_space()) lat->pin_ball(domain.obstacle_radius);
  }
  pb->lat = lat;
  pb->ef = std::make_shared<EnergyFunctional>(pb->lat, params, V, grid.order, backend);
  pb->ball = BallStencil::build(*lat, 1.0);
  pb->theta.assign(lat->size(), 0.0);
  const double ramp = domain.cutoff_R > 0 ? domain.cutoff_R : 1.0;
  for (std::size_t i = 0; i < lat->size(); ++i) {
    if (!lat->free[i]) continue;
    const auto x = lat->position(i);
    if (pb->half_line()) {
      pb->theta[i] = smooth_ramp(std::clamp(x[0] / ramp, 0.0, 1.0), domain.ramp_eps);
    } else {
      double r2 = 0;
      for (int a = 0; a < params.N; ++a) r2 += x[a] * x[a];
      pb->theta[i] = domain.theta(std::sqrt(r2));
    }
  }
  return pb;
}

GridField soliton_field(const Problem& pb, const RadialProfile& w, const std::array<double, 3>& c, bool cutoff) {
  const Lattice& L = *pb.lat;
  GridField u(pb.lat);
  for (std::size_t i = 0; i < L.size(); ++i) {
    if (!L.free[i]) continue;
    const auto x = L.position(i);
    double r2 = 0;
    for (int a = 0; a < L.dim; ++a) r2 += (x[a] - c[a]) * (x[a] - c[a]);
    u.v[i] = w.value(std::sqrt(r2)) * (cutoff ? pb.theta[i] : 1.0);
  }
  return u;
}

DiscreteReference discrete_reference(const Problem& pb) {
  std::shared_ptr<const Problem> Q;
  const bool plain = !pb.half_line() && pb.domain.whole_space() && pb.V.is_zero();
  if (plain) {
    Q = std::shared_ptr<const Problem>(&pb, [](const Problem*) {});
  } else {
    GridSpec g = pb.grid;
    if (pb.half_line()) {
      g.x_max = 0;
      g.half_width = std::max(0.5 * pb.grid.x_max, 20.0 * pb.decay_length());
    }
    Q = make_problem(pb.params, ExteriorDomainSpec{}, PotentialSpec{}, g, pb.ef->backend(), &pb.w);
  }
  DescentOptions opt;
  opt.tol = 1e-9;
  opt.max_iter = 400;
  auto D = constrained_descent(*Q, project_mass(soliton_field(*Q, Q->w, {0, 0, 0}, false), pb.params.rho), opt);
  DiscreteReference ref;
  ref.m = pb.w.energy;
  ref.m_h = D.energy;
  ref.eta = std::abs(ref.m_h - ref.m);
  ref.two_minus_s_m = pb.sc.threshold_factor * ref.m;
  ref.two_minus_s_m_h = pb.sc.threshold_factor * ref.m_h;
  ref.residual = D.residual;
  return ref;
}

std::array<double, 3> sigma_point(int N, const std::vector<double>& ang) {
  std::array<double, 3> z{1, 0, 0};
  if (N == 1) {
    z[0] = 1 + 2 * std::cos(ang[0]);
  } else if (N == 2) {
    z[0] = 1 + 2 * std::cos(ang[0]);
    z[1] = 2 * std::sin(ang[0]);
  } else {
    z[0] = 1 + 2 * std::sin(ang[0]) * std::cos(ang[1]);
    z[1] = 2 * std::sin(ang[0]) * std::sin(ang[1]);
    z[2] = 2 * std::cos(ang[0]);
  }
  return z;
}

SigmaMesh make_sigma_mesh(int N, int points) {
  SigmaMesh S;
  S.N = N;
  const double pi = std::numbers::pi;
  if (N == 1) {
    S.angles = {{pi}, {0.0}};
  } else if (N == 2) {
    if (points < 4) throw std::invalid_argument("Sigma mesh needs at least 4 points");
    for (int j = 0; j < points; ++j) S.angles.push_back({2 * pi * j / points});
  } else {
    if (points < 8) throw std::invalid_argument("Sigma mesh needs at least 8 points");
    const double golden = pi * (3 - std::sqrt(5.0));
    for (int j = 0; j < points; ++j) {
      const double zc = 1 - 2 * (j + 0.5) / points;
      S.angles.push_back({std::acos(zc), std::fmod(golden * j, 2 * pi)});
    }
  }
  for (const auto& a : S.angles) S.z.push_back(sigma_point(N, a));
  return S;
}

const RadialProfile& ProfileCache::get(double k) {
  if (k == 1.0) return base_;
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(k);
  if (it != cache_.end()) return *it->second;
  auto p = std::make_unique<RadialProfile>(scaled_profile(base_, k));
  const RadialProfile& ref = *p;
  cache_.emplace(k, std::move(p));
  return ref;
}

GridField TestSurface::field(double t, const std::array<double, 3>& z) const {
  const Problem& P = *prob;
  const Lattice& L = *P.lat;
  const RadialProfile* ws = t > 0 ? &profiles->get(t) : nullptr;
  const RadialProfile* wl = t < 1 ? &profiles->get(1 - t) : nullptr;
  std::array<double, 3> c1{0, 0, 0}, c2{r, 0, 0};
  for (int a = 0; a < L.dim; ++a) c1[a] = r * z[a];
  GridField u(P.lat);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(L.size());
#pragma omp parallel for schedule(static) if (!omp_in_parallel())
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (!L.free[i]) continue;
    const auto x = L.position(static_cast<std::size_t>(i));
    double d1 = 0, d2 = 0;
    for (int a = 0; a < L.dim; ++a) {
      d1 += (x[a] - c1[a]) * (x[a] - c1[a]);
      d2 += (x[a] - c2[a]) * (x[a] - c2[a]);
    }
    double v = 0;
    if (ws) v += ws->value(std::sqrt(d1));
    if (wl) v += wl->value(std::sqrt(d2));
    u.v[i] = P.theta[i] * v;
  }
  return project_mass(u, P.params.rho);
}

namespace {

double energy_serial(const Problem& P, const GridField& u) {
  const auto& V = P.ef->potential();
  auto s = kernels(Backend::serial).energy_sums(*P.lat, P.ef->order(), u.v.data(), V.empty() ? nullptr : V.data(),
                                                P.params.p);
  return (0.5 * s.kinetic + 0.5 * s.potential - s.power / P.params.p) * P.lat->cell_volume();
}

}  // namespace

double TestSurface::field_energy(double t, const std::array<double, 3>& z) const {
  return energy_serial(*prob, field(t, z));
}

TestSurface build_surface(double r, std::shared_ptr<const Problem> pb, const SurfaceOptions& opt) {
  if (opt.t_points < 2) throw std::invalid_argument("t grid needs at least 2 points");
  TestSurface S;
  S.r = r;
  S.prob = pb;
  S.sigma = make_sigma_mesh(pb->params.N, opt.sigma_points);
  S.profiles = std::make_shared<ProfileCache>(pb->w);
  for (int i = 0; i < opt.t_points; ++i) S.t_grid.push_back(static_cast<double>(i) / (opt.t_points - 1));
  for (double t : S.t_grid) {
    if (t > 0) S.profiles->get(t);
    if (t < 1) S.profiles->get(1 - t);
  }
  if (!pb->domain.whole_space()) S.obstacle_overlap = r < pb->domain.cutoff_R;

  const int nt = static_cast<int>(S.t_grid.size()), nz = static_cast<int>(S.sigma.z.size());
  S.energy.assign(nt, std::vector<double>(nz, 0.0));
  S.beta.assign(nt, std::vector<std::array<double, 3>>(nz, {0, 0, 0}));
  // the t = 0 row does not depend on z
  {
    GridField f = S.field(0.0, S.sigma.z[0]);
    const double e = energy_serial(*pb, f);
    const auto b = opt.with_beta ? barycenter(f, pb->ball, Backend::serial).beta : std::array<double, 3>{0, 0, 0};
    for (int j = 0; j < nz; ++j) {
      S.energy[0][j] = e;
      S.beta[0][j] = b;
    }
  }
  const int total = (nt - 1) * nz;
#pragma omp parallel for schedule(dynamic)
  for (int idx = 0; idx < total; ++idx) {
    const int i = 1 + idx / nz, j = idx % nz;
    GridField f = S.field(S.t_grid[i], S.sigma.z[j]);
    S.energy[i][j] = energy_serial(*pb, f);
    if (opt.with_beta) S.beta[i][j] = barycenter(f, pb->ball, Backend::serial).beta;
  }
  return S;
}

}  // namespace normsol
