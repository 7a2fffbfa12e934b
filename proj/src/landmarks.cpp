#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "normsol/minmax.hpp"
#include "normsol/saddle.hpp"

namespace normsol {

namespace {

constexpr double kPi = std::numbers::pi;

double angle_step(const TestSurface& S) {
  const int N = S.prob->params.N;
  const double M = static_cast<double>(S.sigma.z.size());
  if (N == 2) return 2 * kPi / M;
  if (N == 3) return std::sqrt(4 * kPi / M);
  return 0;
}

// compass search for a local maximum around a mesh point
SurfacePoint refine_max(const TestSurface& S, double t0, std::vector<double> ang, double v0, bool fix_t) {
  const int N = S.prob->params.N;
  const int na = N == 1 ? 0 : N - 1;
  double step_t = fix_t ? 0.0 : 0.5 / (S.t_grid.size() - 1);
  double step_a = 0.5 * angle_step(S);
  SurfacePoint best;
  best.value = v0;
  best.t = t0;
  best.angles = ang;
  for (int halving = 0; halving < 6; ++halving) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int k = -1; k < na; ++k) {
        if (k < 0 && fix_t) continue;
        for (int sgn : {-1, 1}) {
          double t = best.t;
          auto a = best.angles;
          if (k < 0)
            t = std::clamp(t + sgn * step_t, 0.0, 1.0);
          else
            a[k] += sgn * step_a;
          if (N == 3) a[0] = std::clamp(a[0], 0.0, kPi);
          const double v = S.field_energy(t, sigma_point(N, a));
          if (v > best.value) {
            best.value = v;
            best.t = t;
            best.angles = a;
            improved = true;
          }
        }
      }
    }
    step_t *= 0.5;
    step_a *= 0.5;
  }
  best.z = sigma_point(N, best.angles);
  return best;
}

double norm3(const std::array<double, 3>& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

std::array<double, 3> beta_at(const TestSurface& S, double t, const std::vector<double>& ang) {
  const auto& pb = *S.prob;
  return barycenter(S.field(t, sigma_point(pb.params.N, ang)), pb.ball, pb.ef->backend()).beta;
}

// Newton on the map (t, angles) -> beta, finite-difference Jacobian
bool polish_zero(const TestSurface& S, double& t, std::vector<double>& ang, std::array<double, 3>& beta) {
  const int N = S.prob->params.N;
  const double h = S.prob->lat->h;
  const double eps_t = 1e-3, eps_a = 1e-3;
  beta = beta_at(S, t, ang);
  for (int it = 0; it < 25 && norm3(beta) >= 0.05 * h; ++it) {
    // unknowns: t and the first N-1 angles
    const int nu = N;
    std::vector<std::array<double, 3>> cols(nu);
    for (int k = 0; k < nu; ++k) {
      double tt = t;
      auto aa = ang;
      double e = 0;
      if (k == 0) {
        e = t + eps_t <= 1 ? eps_t : -eps_t;
        tt += e;
      } else {
        e = eps_a;
        aa[k - 1] += e;
      }
      const auto b = beta_at(S, tt, aa);
      for (int d = 0; d < 3; ++d) cols[k][d] = (b[d] - beta[d]) / e;
    }
    // least squares J x = -beta via normal equations (N <= 3)
    double A[3][3] = {}, rhs[3] = {};
    for (int i = 0; i < nu; ++i) {
      for (int j = 0; j < nu; ++j)
        for (int d = 0; d < N; ++d) A[i][j] += cols[i][d] * cols[j][d];
      for (int d = 0; d < N; ++d) rhs[i] -= cols[i][d] * beta[d];
    }
    double x[3] = {};
    for (int i = 0; i < nu; ++i) A[i][i] *= 1 + 1e-10;
    // Gaussian elimination with partial pivoting
    int piv[3] = {0, 1, 2};
    for (int c = 0; c < nu; ++c) {
      int best = c;
      for (int r = c + 1; r < nu; ++r)
        if (std::abs(A[piv[r]][c]) > std::abs(A[piv[best]][c])) best = r;
      std::swap(piv[c], piv[best]);
      const double d = A[piv[c]][c];
      if (std::abs(d) < 1e-300) return false;
      for (int r = c + 1; r < nu; ++r) {
        const double f = A[piv[r]][c] / d;
        for (int k = c; k < nu; ++k) A[piv[r]][k] -= f * A[piv[c]][k];
        rhs[piv[r]] -= f * rhs[piv[c]];
      }
    }
    for (int c = nu - 1; c >= 0; --c) {
      double s = rhs[piv[c]];
      for (int k = c + 1; k < nu; ++k) s -= A[piv[c]][k] * x[k];
      x[c] = s / A[piv[c]][c];
    }
    // damped update
    double scale = 1.0;
    for (int ls = 0; ls < 8; ++ls, scale *= 0.5) {
      double tt = std::clamp(t + scale * x[0], 0.0, 1.0);
      auto aa = ang;
      for (int k = 1; k < nu; ++k) aa[k - 1] += scale * x[k];
      const auto b = beta_at(S, tt, aa);
      if (norm3(b) < norm3(beta)) {
        t = tt;
        ang = aa;
        beta = b;
        break;
      }
      if (ls == 7) return norm3(beta) < h;
    }
  }
  return norm3(beta) < h;
}

double wrap_angle(double a) {
  while (a > kPi) a -= 2 * kPi;
  while (a <= -kPi) a += 2 * kPi;
  return a;
}

}  // namespace

MinMaxReport landmarks(const TestSurface& S, const DiscreteReference& ref, double C0) {
  MinMaxReport R;
  R.r = S.r;
  R.m = ref.m;
  R.two_minus_s_m = ref.two_minus_s_m;
  R.m_h = ref.m_h;
  R.two_minus_s_m_h = ref.two_minus_s_m_h;
  R.eta = ref.eta;
  R.C0 = C0;
  const std::size_t nt = S.t_grid.size(), nz = S.sigma.z.size();
  // first occurrence wins: smallest t, then mesh order in z
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = 0; j < nz; ++j)
      if (S.energy[i][j] > S.energy[bi][bj]) {
        bi = i;
        bj = j;
      }
  R.A_r = refine_max(S, S.t_grid[bi], S.sigma.angles[bj], S.energy[bi][bj], false);
  std::size_t lj = 0;
  for (std::size_t j = 0; j < nz; ++j)
    if (S.energy[nt - 1][j] > S.energy[nt - 1][lj]) lj = j;
  R.L_r = refine_max(S, 1.0, S.sigma.angles[lj], S.energy[nt - 1][lj], true);

  const double m3 = 3 * R.eta;
  R.margins = {R.L_r.value - R.m_h, C0 - R.L_r.value, R.A_r.value - C0, R.two_minus_s_m_h - R.A_r.value};
  const char* names[4] = {"m < L_r", "L_r < C0", "C0 <= A_r", "A_r < 2^-s m"};
  R.ordering_ok = true;
  for (int k = 0; k < 4; ++k) {
    const bool ok = k == 2 ? R.margins[k] >= -m3 : R.margins[k] > m3;
    if (!ok) {
      R.ordering_ok = false;
      if (!R.failed.empty()) R.failed += "; ";
      R.failed += names[k];
    }
  }
  return R;
}

Witness find_zero_barycenter(const TestSurface& S) {
  const auto& pb = *S.prob;
  const int N = pb.params.N;
  const double h = pb.lat->h;
  const std::size_t nt = S.t_grid.size(), nz = S.sigma.z.size();
  if (S.beta.empty()) throw std::invalid_argument("surface built without barycenters");
  Witness W;
  auto finish = [&](double t, const std::vector<double>& ang, const std::array<double, 3>& b, const char* how) {
    W.t = t;
    W.angles = ang;
    W.z = sigma_point(N, ang);
    W.beta = b;
    W.beta_norm = norm3(b);
    W.found = W.beta_norm < h;
    W.energy = S.field_energy(t, W.z);
    W.method = how;
    return W;
  };

  // a mesh node that already sits on the zero set
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = 0; j < nz; ++j)
      if (norm3(S.beta[i][j]) < 0.1 * h) return finish(S.t_grid[i], S.sigma.angles[j], S.beta[i][j], "mesh-node");

  if (N == 1) {
    for (std::size_t j = 0; j < nz; ++j)
      for (std::size_t i = 0; i + 1 < nt; ++i) {
        double a = S.t_grid[i], b = S.t_grid[i + 1];
        double fa = S.beta[i][j][0], fb = S.beta[i + 1][j][0];
        if (fa * fb > 0) continue;
        W.degree = fa < fb ? 1 : -1;
        std::array<double, 3> bm{};
        double tm = a;
        for (int it = 0; it < 60; ++it) {
          tm = 0.5 * (a + b);
          bm = beta_at(S, tm, S.sigma.angles[j]);
          if (std::abs(bm[0]) < 0.05 * h) break;
          if ((bm[0] < 0) == (fa < 0)) {
            a = tm;
            fa = bm[0];
          } else {
            b = tm;
          }
        }
        return finish(tm, S.sigma.angles[j], bm, "bisection");
      }
    W.method = "no sign change";
    return W;
  }

  if (N == 2) {
    for (std::size_t i = 0; i + 1 < nt; ++i)
      for (std::size_t j = 0; j < nz; ++j) {
        const std::size_t j2 = (j + 1) % nz;
        const std::array<double, 3>* c[4] = {&S.beta[i][j], &S.beta[i + 1][j], &S.beta[i + 1][j2], &S.beta[i][j2]};
        double wind = 0;
        for (int k = 0; k < 4; ++k) {
          const auto& p = *c[k];
          const auto& q = *c[(k + 1) % 4];
          wind += wrap_angle(std::atan2(q[1], q[0]) - std::atan2(p[1], p[0]));
        }
        const int deg = static_cast<int>(std::lround(wind / (2 * kPi)));
        if (deg == 0) continue;
        W.degree = deg;
        double t = 0.5 * (S.t_grid[i] + S.t_grid[i + 1]);
        std::vector<double> ang{S.sigma.angles[j][0] + 0.5 * angle_step(S)};
        std::array<double, 3> b{};
        polish_zero(S, t, ang, b);
        return finish(t, ang, b, "winding-cell");
      }
    W.method = "no sign-covering cell";
    return W;
  }

  // N = 3: start from the smallest |beta| on the mesh
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = 0; j < nz; ++j)
      if (norm3(S.beta[i][j]) < norm3(S.beta[bi][bj])) {
        bi = i;
        bj = j;
      }
  double t = S.t_grid[bi];
  auto ang = S.sigma.angles[bj];
  std::array<double, 3> b{};
  polish_zero(S, t, ang, b);
  return finish(t, ang, b, "min-norm-polish");
}

C0Estimate estimate_C0(const Problem& pb, const GridField* witness, double r, const C0Options& opt) {
  const double rho = pb.params.rho;
  const double h = pb.lat->h;
  const double ell = pb.decay_length();
  const double mscale = std::abs(pb.w.energy) / (ell * ell);
  std::array<double, 3> target{0, 0, 0};
  if (pb.half_line() && !pb.V.center.empty()) target[0] = pb.V.center[0];
  std::vector<double> pens = opt.penalties.empty() ? std::vector<double>{1, 10, 100} : opt.penalties;

  ProfileCache cache(pb.w);
  auto two_bump = [&](double ta, double xa, double xb) {
    GridField u = soliton_field(pb, cache.get(ta), {xa, 0, 0});
    GridField v = soliton_field(pb, cache.get(1 - ta), {xb, 0, 0});
    for (std::size_t i = 0; i < u.size(); ++i) u.v[i] += v.v[i];
    return project_mass(u, rho);
  };

  std::vector<std::pair<std::string, GridField>> starts;
  if (witness) starts.emplace_back("witness", *witness);
  if (opt.include_centred) starts.emplace_back("centred", project_mass(soliton_field(pb, pb.w, target), rho));
  if (opt.include_dipole) starts.emplace_back("dipole", two_bump(0.5, target[0] - r, target[0] + r));
  if (opt.include_asymmetric) starts.emplace_back("asymmetric", two_bump(0.6, target[0] - 0.8 * r, target[0] + 1.2 * r));

  C0Estimate est;
  est.value = std::numeric_limits<double>::infinity();
  auto consider = [&](const std::string& name, const GridField& u, double e, double bnorm, bool conv, int iters) {
    C0Start s;
    s.name = name;
    s.value = e;
    s.beta_norm = bnorm;
    s.feasible = bnorm <= h;
    s.converged = conv;
    s.iterations = iters;
    est.starts.push_back(s);
    if (s.feasible && e < est.value) {
      est.value = e;
      est.best_start = name;
      est.minimizer = u;
      est.converged = conv;
    }
  };
  auto dist_to_target = [&](const std::array<double, 3>& b) {
    double s = 0;
    for (int a = 0; a < 3; ++a) s += (b[a] - target[a]) * (b[a] - target[a]);
    return std::sqrt(s);
  };

  if (witness) {
    GridField w = project_mass(*witness, rho);
    consider("witness-raw", w, pb.ef->total_energy(w), dist_to_target(barycenter(w, pb.ball).beta), true, 0);
  }
  for (auto& [name, u0] : starts) {
    const Symmetry sym = detect_symmetry(pb, u0);
    bool fixed = target == std::array<double, 3>{0, 0, 0};
    for (int a = 0; a < pb.params.N; ++a) fixed = fixed && sym.fixes(a);
    DescentOptions d;
    d.max_iter = opt.max_iter;
    d.tol = opt.tol;
    d.target = target;
    if (fixed) {
      auto D = constrained_descent(pb, u0, d);
      consider(name, D.u, D.energy, dist_to_target(D.beta), D.converged, D.iterations);
    } else {
      GridField u = u0;
      int iters = 0;
      bool conv = false;
      double e = 0;
      std::array<double, 3> b{};
      for (double k : pens) {
        d.penalty = k * mscale;
        d.tol = opt.tol * std::sqrt(k);
        auto D = constrained_descent(pb, u, d);
        u = D.u;
        iters += D.iterations;
        conv = D.converged;
        e = D.energy;
        b = D.beta;
      }
      consider(name, u, e, dist_to_target(b), conv, iters);
    }
  }
  return est;
}

}  // namespace normsol
